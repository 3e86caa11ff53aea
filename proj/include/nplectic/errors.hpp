#pragma once

#include <stdexcept>
#include <string>

namespace nplectic {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Objects defined over different coordinate dimensions were combined.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// A coordinate / basis index lies outside 1..dim.
class IndexError : public Error {
public:
    explicit IndexError(const std::string& what) : Error(what) {}
};

/// A permutation or degree signature has the wrong length.
class ArityError : public Error {
public:
    explicit ArityError(const std::string& what) : Error(what) {}
};

/// A precondition on arguments was violated (degree, homogeneity, range, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// The candidate (n+1)-form is not closed.  Carries a textual witness term.
class NotClosed : public Error {
public:
    NotClosed(const std::string& what, std::string witness_term)
        : Error(what), witness(std::move(witness_term)) {}
    std::string witness;
};

/// The candidate (n+1)-form has a degenerate contraction map on vector
/// fields.  Carries the offending kernel vector, rendered.
class Degenerate : public Error {
public:
    Degenerate(const std::string& what, std::string kernel_vector)
        : Error(what), witness(std::move(kernel_vector)) {}
    std::string witness;
};

/// The solvers only handle constant-coefficient pairing forms.
class NonConstantOmega : public Error {
public:
    explicit NonConstantOmega(const std::string& what) : Error(what) {}
};

/// A bracket argument is missing the solved associate it needs.
class UnsolvedArgument : public Error {
public:
    explicit UnsolvedArgument(const std::string& what) : Error(what) {}
};

/// A bracket produced a value that is not Hamiltonian, so the inductive
/// tower cannot continue through it.
class BracketValueNotHamiltonian : public Error {
public:
    explicit BracketValueNotHamiltonian(const std::string& what) : Error(what) {}
};

/// The scalar passed to the module action is not in the function algebra
/// of the pairing form (dg wedge omega != 0).
class NotNPlecticFunction : public Error {
public:
    explicit NotNPlecticFunction(const std::string& what) : Error(what) {}
};

/// Manifest text could not be parsed.  1-based line / column.
class ParseError : public Error {
public:
    ParseError(int line_, int column_, const std::string& message)
        : Error("parse error at " + std::to_string(line_) + ":" +
                std::to_string(column_) + ": " + message),
          line(line_), column(column_) {}
    int line;
    int column;
};

}  // namespace nplectic
