#pragma once

//
// Exact rational scalars.
//
// All arithmetic in this library is exact.  The scalar type is a GMP-backed
// rational; results are always canonical (reduced, positive denominator).
//

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace nplectic {

using Rational = boost::multiprecision::mpq_rational;
using Integer  = boost::multiprecision::mpz_int;

/// Render a rational the way the manifest language writes literals:
/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) { return r.str(); }

inline bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

}  // namespace nplectic
