#pragma once

//
// Sparse multivariate polynomials over exact rationals.
//
// A monomial is a dense exponent vector of fixed length d (the coordinate
// dimension); a polynomial maps monomials to nonzero rational coefficients.
// Terms are kept in graded-lexicographic order, leading term first (higher
// total degree wins, ties broken lexicographically with x1 strongest), so
// iteration order is rendering order:  x1^2*x3 - x4.
//

#include "errors.hpp"
#include "rational.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace nplectic {

struct Monomial {
    std::vector<int> exps;  ///< exponent of x_{i+1} at position i

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}

    static Monomial one(int dim) { return Monomial(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

    [[nodiscard]] int dim() const { return static_cast<int>(exps.size()); }
    [[nodiscard]] long long total_degree() const {
        return std::accumulate(exps.begin(), exps.end(), 0LL);
    }
    [[nodiscard]] bool is_constant() const { return total_degree() == 0; }

    bool operator==(const Monomial& o) const { return exps == o.exps; }

    [[nodiscard]] std::string render() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0) continue;
            if (!first) os << "*";
            os << "x" << (i + 1);
            if (exps[i] != 1) os << "^" << exps[i];
            first = false;
        }
        return first ? "1" : os.str();
    }
};

/// strict weak order placing the graded-lex *leading* monomial first
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const long long da = a.total_degree(), db = b.total_degree();
        if (da != db) return da > db;
        return a.exps > b.exps;  // higher power of the earliest variable first
    }
};

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() : dim_(0) {}
    explicit Polynomial(int dim) : dim_(dim) {}

    static Polynomial constant(int dim, const Rational& c) {
        Polynomial p(dim);
        p.add_term(Monomial::one(dim), c);
        return p;
    }
    /// the coordinate function x_i (1-based)
    static Polynomial variable(int dim, int i) {
        if (i < 1 || i > dim)
            throw IndexError("variable index " + std::to_string(i) + " outside 1.." + std::to_string(dim));
        std::vector<int> e(static_cast<std::size_t>(dim), 0);
        e[static_cast<std::size_t>(i - 1)] = 1;
        Polynomial p(dim);
        p.add_term(Monomial(std::move(e)), 1);
        return p;
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }
    [[nodiscard]] Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw InvalidArgument("constant_value on non-constant polynomial");
        return terms_.begin()->second;
    }
    [[nodiscard]] long long total_degree() const {  // degree of the leading term; -1 for zero
        return terms_.empty() ? -1 : terms_.begin()->first.total_degree();
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (m.dim() != dim_) throw DimensionMismatch("monomial dimension mismatch");
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(dim_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_dim(b);
        Polynomial r(a.dim_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                std::vector<int> e(ma.exps);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += mb.exps[i];
                r.add_term(Monomial(std::move(e)), ca * cb);
            }
        return r;
    }
    friend Polynomial operator*(const Rational& c, const Polynomial& p) {
        Polynomial r(p.dim_);
        if (c == 0) return r;
        for (const auto& [m, k] : p.terms_) r.terms_.emplace(m, c * k);
        return r;
    }
    friend Polynomial operator*(const Polynomial& p, const Rational& c) { return c * p; }

    bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    /// partial derivative with respect to x_i (1-based)
    [[nodiscard]] Polynomial partial(int i) const {
        if (i < 1 || i > dim_)
            throw IndexError("partial index " + std::to_string(i) + " outside 1.." + std::to_string(dim_));
        Polynomial r(dim_);
        for (const auto& [m, c] : terms_) {
            const int e = m.exps[static_cast<std::size_t>(i - 1)];
            if (e == 0) continue;
            std::vector<int> red(m.exps);
            red[static_cast<std::size_t>(i - 1)] -= 1;
            r.add_term(Monomial(std::move(red)), c * e);
        }
        return r;
    }

    [[nodiscard]] Rational eval(const std::vector<Rational>& point) const {
        if (static_cast<int>(point.size()) != dim_)
            throw DimensionMismatch("eval point dimension mismatch");
        Rational total(0);
        for (const auto& [m, c] : terms_) {
            Rational v = c;
            for (std::size_t i = 0; i < m.exps.size(); ++i)
                for (int e = 0; e < m.exps[i]; ++e) v *= point[i];
            total += v;
        }
        return total;
    }

    /// "x1^2*x3 - x4"; zero renders as "0"
    [[nodiscard]] std::string render() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            const bool neg = c < 0;
            const Rational a = neg ? Rational(-c) : c;
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            if (m.is_constant())
                os << to_string(a);
            else if (a == 1)
                os << m.render();
            else
                os << to_string(a) << "*" << m.render();
            first = false;
        }
        return os.str();
    }

private:
    void check_dim(const Polynomial& o) const {
        if (dim_ != o.dim_)
            throw DimensionMismatch("polynomial dimensions " + std::to_string(dim_) + " vs " +
                                    std::to_string(o.dim_));
    }

    int dim_;
    TermMap terms_;
};

}  // namespace nplectic
