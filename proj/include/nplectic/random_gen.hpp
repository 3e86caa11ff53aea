#pragma once

//
// Seed-reproducible random tensors.  Draws go through a fixed-width
// rejection sampler over std::mt19937_64 rather than the standard
// distributions, whose output is implementation-defined; identical seeds
// must produce identical reports on every platform.
//

#include "space.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace nplectic {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    /// uniform integer in [lo, hi], inclusive
    long long uniform(long long lo, long long hi) {
        if (lo > hi) throw InvalidArgument("uniform: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        if (span == 0) return static_cast<long long>(eng_());  // full 64-bit range
        const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / span) * span;
        std::uint64_t r = eng_();
        while (r >= limit) r = eng_();
        return lo + static_cast<long long>(r % span);
    }

    /// uniform nonzero integer in [-bound, bound]
    long long nonzero(long long bound) {
        long long v = uniform(-bound, bound);
        while (v == 0) v = uniform(-bound, bound);
        return v;
    }

    bool chance(long long num, long long den) { return uniform(1, den) <= num; }

private:
    std::mt19937_64 eng_;
};

/// Random polynomial with `terms` monomials of total degree <= max_degree
/// and nonzero integer coefficients in [-coeff_bound, coeff_bound].
inline Polynomial random_polynomial(Rng& rng, int dim, int max_degree, int terms,
                                    long long coeff_bound = 4) {
    Polynomial p(dim);
    for (int t = 0; t < terms; ++t) {
        Monomial m = Monomial::one(dim);
        const int total = static_cast<int>(rng.uniform(0, max_degree));
        for (int j = 0; j < total; ++j)
            ++m.exps[static_cast<std::size_t>(rng.uniform(0, dim - 1))];
        Polynomial term(dim);
        term.add_term(m, Rational(rng.nonzero(coeff_bound)));
        p += term;
    }
    return p;
}

/// Random homogeneous multivector field of the given tensor degree.
inline MultiVec random_multivec(Rng& rng, int dim, int degree, int components = 2,
                                int max_poly_degree = 2, int poly_terms = 2,
                                long long coeff_bound = 4) {
    const auto tuples = basis_tuples(dim, degree);
    if (tuples.empty()) throw InvalidArgument("random_multivec: no basis at this degree");
    MultiVec x(dim);
    for (int c = 0; c < components; ++c) {
        const auto& t = tuples[static_cast<std::size_t>(
            rng.uniform(0, static_cast<long long>(tuples.size()) - 1))];
        x.add_term(t, random_polynomial(rng, dim, max_poly_degree, poly_terms, coeff_bound));
    }
    return x;
}

/// Random homogeneous differential form of the given tensor degree.
inline DiffForm random_form(Rng& rng, int dim, int degree, int components = 2,
                            int max_poly_degree = 2, int poly_terms = 2,
                            long long coeff_bound = 4) {
    const auto tuples = basis_tuples(dim, degree);
    if (tuples.empty()) throw InvalidArgument("random_form: no basis at this degree");
    DiffForm a(dim);
    for (int c = 0; c < components; ++c) {
        const auto& t = tuples[static_cast<std::size_t>(
            rng.uniform(0, static_cast<long long>(tuples.size()) - 1))];
        a.add_term(t, random_polynomial(rng, dim, max_poly_degree, poly_terms, coeff_bound));
    }
    return a;
}

struct RandomHamiltonianForm {
    DiffForm f;          ///< the drawn form, guaranteed Hamiltonian
    MultiVec witness;    ///< the field it was contracted from: i_witness omega = -f
    int discarded = 0;   ///< draws rejected before this one
};

/// Draw a Hamiltonian form of tensor degree `form_degree`: contract omega
/// with a random field of the complementary degree (so the second
/// fundamental equation holds by construction) and reject draws whose first
/// fundamental equation is unsolvable or whose value is zero.
inline RandomHamiltonianForm random_hamiltonian_form(const NPlecticSpace& space, Rng& rng,
                                                     int form_degree, int max_poly_degree = 1,
                                                     int poly_terms = 1, long long coeff_bound = 3,
                                                     int max_attempts = 500) {
    const int k = space.plectic_degree() + 1 - form_degree;
    if (k < 0 || k > space.dim())
        throw InvalidArgument("random_hamiltonian_form: degree out of range");
    RandomHamiltonianForm out{DiffForm(space.dim()), MultiVec(space.dim()), 0};
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        MultiVec y = random_multivec(rng, space.dim(), k, 2, max_poly_degree, poly_terms,
                                     coeff_bound);
        DiffForm f = Rational(-1) * contraction(y, space.omega());
        if (f.is_zero()) {
            ++out.discarded;
            continue;
        }
        if (!solve_semi_hamiltonian(space, f).ok()) {
            ++out.discarded;
            continue;
        }
        out.f = std::move(f);
        out.witness = std::move(y);
        return out;
    }
    throw Error("random_hamiltonian_form: could not draw a Hamiltonian form at degree " +
                std::to_string(form_degree));
}

/// Random polynomial-coefficient element of the pairing kernel at the given
/// multivector degree (zero if the kernel is trivial there).
inline MultiVec random_kernel_element(const NPlecticSpace& space, Rng& rng, int degree,
                                      int max_poly_degree = 1, long long coeff_bound = 3) {
    MultiVec xi(space.dim());
    for (const auto& basis_elt : kernel_basis(space, degree)) {
        if (!rng.chance(1, 2)) continue;
        xi += random_polynomial(rng, space.dim(), max_poly_degree, 1, coeff_bound) * basis_elt;
    }
    return xi;
}

}  // namespace nplectic
