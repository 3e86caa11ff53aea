#pragma once

//
// Validated pairing spaces and the two fundamental contraction equations.
//
// An NPlecticSpace wraps (R^d, omega, n) where omega is a closed (n+1)-form
// whose contraction map on vector fields is injective.  For constant
// coefficient omega the pairing X -> i_X omega is, per tensor degree k, a
// constant rational matrix from the Lambda^k basis to the Lambda^{n+1-k}
// basis; polynomial right-hand sides are solved exactly monomial slice by
// monomial slice against a cached row reduction of that matrix.
//
// The two equations:
//   fundamental 1:  i_X omega = -d f   (f "semi-Hamiltonian", |X| = n - |f|)
//   fundamental 2:  i_Y omega = -f     (f "Hamiltonian",      |Y| = n + 1 - |f|)
//

#include "errors.hpp"
#include "linalg.hpp"
#include "tensor.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

namespace nplectic {

/// all strictly increasing k-tuples from {1..d}, lexicographic
inline std::vector<IndexTuple> basis_tuples(int d, int k) {
    std::vector<IndexTuple> out;
    if (k < 0 || k > d) return out;
    IndexTuple cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == d - k + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

/// The linearization of X -> i_X omega at multivector degree k:
/// matrix * (X coefficients over domain_basis) = (i_X omega over target_basis).
struct ContractionMatrix {
    int source_degree = 0;
    Matrix matrix;                        // shape |target_basis| x |domain_basis|
    std::vector<IndexTuple> domain_basis; // Lambda^k, lexicographic
    std::vector<IndexTuple> target_basis; // Lambda^{n+1-k}, lexicographic
};

struct NoSolutionWitness {
    int multivector_degree = 0;        // degree of the sought multivector
    Monomial monomial;                 // the failing monomial slice
    std::vector<Rational> lambda;      // lambda^T M = 0 but lambda^T b != 0
    std::string detail;                // rendered one-line explanation

    [[nodiscard]] std::string render() const { return detail; }
};

struct SolveOutcome {
    std::optional<MultiVec> solution;  // free coordinates set to zero
    int kernel_dimension = 0;          // of the pairing at the solved degree(s)
    std::optional<NoSolutionWitness> failure;

    [[nodiscard]] bool ok() const { return solution.has_value(); }
};

enum class HamStatus { Hamiltonian, SemiHamiltonian, Neither };

inline std::string to_string(HamStatus s) {
    switch (s) {
        case HamStatus::Hamiltonian: return "Hamiltonian";
        case HamStatus::SemiHamiltonian: return "semi-Hamiltonian";
        case HamStatus::Neither: return "neither";
    }
    return "?";
}

/// A differential form together with whatever solutions of the fundamental
/// equations exist for it.  Stored associates satisfy their equations
/// exactly (this is asserted at construction time).
struct HamiltonianForm {
    DiffForm f;
    std::optional<MultiVec> semi_associate;  // X with i_X omega = -d f
    std::optional<MultiVec> ham_associate;   // Y with i_Y omega = -f
    HamStatus status = HamStatus::Neither;
    std::optional<NoSolutionWitness> semi_failure;
    std::optional<NoSolutionWitness> ham_failure;

    [[nodiscard]] bool is_hamiltonian() const { return status == HamStatus::Hamiltonian; }
    [[nodiscard]] std::string key() const { return f.render(); }
};

class NPlecticSpace {
public:
    NPlecticSpace(int dim, int n, DiffForm omega, bool constant, bool injectivity_certified)
        : dim_(dim), n_(n), omega_(std::move(omega)), constant_(constant),
          injectivity_certified_(injectivity_certified) {}

    NPlecticSpace(const NPlecticSpace&) = delete;
    NPlecticSpace& operator=(const NPlecticSpace&) = delete;

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int plectic_degree() const { return n_; }
    [[nodiscard]] const DiffForm& omega() const { return omega_; }
    [[nodiscard]] bool constant_coefficients() const { return constant_; }
    /// false when a polynomial omega was only checked at sample points (or
    /// not at all); closedness is always certified exactly
    [[nodiscard]] bool injectivity_certified() const { return injectivity_certified_; }

    /// symmetric degree of a tensor degree r form on this space
    [[nodiscard]] long long sym_degree(int tensor_degree) const { return n_ - tensor_degree; }

    struct PairingData {
        ContractionMatrix cm;
        RowReduction red;
    };

    /// Cached pairing matrix + reduction at multivector degree k (any k >= 0;
    /// for k > n+1 the target space is zero-dimensional).
    const PairingData& pairing(int k) const {
        if (!constant_)
            throw NonConstantOmega("pairing matrices require constant-coefficient omega");
        if (k < 0) throw InvalidArgument("pairing degree must be >= 0");
        {
            std::shared_lock lock(mx_);
            auto it = cache_.find(k);
            if (it != cache_.end()) return *it->second;
        }
        auto data = std::make_unique<PairingData>(build_pairing(k));
        std::unique_lock lock(mx_);
        auto [it, inserted] = cache_.emplace(k, std::move(data));
        return *it->second;
    }

private:
    [[nodiscard]] PairingData build_pairing(int k) const {
        PairingData pd;
        pd.cm.source_degree = k;
        pd.cm.domain_basis = basis_tuples(dim_, k);
        pd.cm.target_basis = basis_tuples(dim_, n_ + 1 - k);
        pd.cm.matrix = Matrix(static_cast<int>(pd.cm.target_basis.size()),
                              static_cast<int>(pd.cm.domain_basis.size()));
        std::map<IndexTuple, int, IndexTupleOrder> row_of;
        for (std::size_t r = 0; r < pd.cm.target_basis.size(); ++r)
            row_of.emplace(pd.cm.target_basis[r], static_cast<int>(r));
        for (std::size_t c = 0; c < pd.cm.domain_basis.size(); ++c) {
            MultiVec x(dim_);
            x.add_term(pd.cm.domain_basis[c], Polynomial::constant(dim_, 1));
            const DiffForm image = contraction(x, omega_);
            for (const auto& [t, poly] : image.components()) {
                auto it = row_of.find(t);
                if (it == row_of.end())
                    throw Error("internal: contraction image outside expected degree");
                pd.cm.matrix.at(it->second, static_cast<int>(c)) = poly.constant_value();
            }
        }
        pd.red = row_reduce(pd.cm.matrix);
        return pd;
    }

    int dim_;
    int n_;
    DiffForm omega_;
    bool constant_;
    bool injectivity_certified_;
    mutable std::map<int, std::unique_ptr<PairingData>> cache_;
    mutable std::shared_mutex mx_;
};

namespace detail {

inline bool tensor_is_constant(const DiffForm& a) {
    for (const auto& [t, c] : a.components())
        if (!c.is_constant()) return false;
    return true;
}

inline DiffForm eval_form(const DiffForm& a, const std::vector<Rational>& point) {
    DiffForm out(a.dim());
    for (const auto& [t, c] : a.components()) {
        const Rational v = c.eval(point);
        if (v != 0) out.add_term(t, Polynomial::constant(a.dim(), v));
    }
    return out;
}

}  // namespace detail

/// Validate (R^dim, omega, n): omega homogeneous of tensor degree n+1 and
/// closed (both exact); the contraction map on vector fields injective --
/// certified by full column rank of the degree-1 pairing for constant omega,
/// or checked at the given rational sample points for polynomial omega
/// (pointwise only; with no sample points injectivity is left uncertified
/// and the returned space says so).
inline std::shared_ptr<NPlecticSpace> validate_nplectic(
    int dim, int n, const DiffForm& omega,
    const std::vector<std::vector<Rational>>& sample_points = {}) {
    if (dim < 2 || n < 1 || n > dim - 1)
        throw InvalidArgument("need 1 <= n <= dim-1 with dim >= 2");
    if (omega.dim() != dim) throw DimensionMismatch("omega dimension mismatch");
    if (omega.is_zero() || !omega.is_homogeneous() || omega.degree() != n + 1)
        throw InvalidArgument("omega must be homogeneous of tensor degree n+1");

    const DiffForm domega = exterior_derivative(omega);
    if (!domega.is_zero()) {
        const auto& [t, c] = *domega.components().begin();
        DiffForm witness(dim);
        witness.add_term(t, c);
        throw NotClosed("omega is not closed", witness.render());
    }

    const bool constant = detail::tensor_is_constant(omega);
    bool certified = false;
    if (constant) {
        NPlecticSpace probe(dim, n, omega, true, false);
        const auto& pd = probe.pairing(1);
        if (pd.red.rank < dim) {
            auto ns = nullspace_basis(pd.red);
            MultiVec kv(dim);
            for (std::size_t c = 0; c < ns.front().size(); ++c)
                if (ns.front()[c] != 0)
                    kv.add_term(pd.cm.domain_basis[c], Polynomial::constant(dim, ns.front()[c]));
            throw Degenerate("contraction map on vector fields is not injective", kv.render());
        }
        certified = true;
    } else {
        for (const auto& pt : sample_points) {
            const DiffForm at_point = detail::eval_form(omega, pt);
            if (at_point.is_zero() || !at_point.is_homogeneous() || at_point.degree() != n + 1)
                throw Degenerate("omega degenerates at a sample point", "omega = 0 at sample point");
            NPlecticSpace probe(dim, n, at_point, true, false);
            const auto& pd = probe.pairing(1);
            if (pd.red.rank < dim) {
                auto ns = nullspace_basis(pd.red);
                MultiVec kv(dim);
                for (std::size_t c = 0; c < ns.front().size(); ++c)
                    if (ns.front()[c] != 0)
                        kv.add_term(pd.cm.domain_basis[c], Polynomial::constant(dim, ns.front()[c]));
                throw Degenerate("contraction map degenerate at sample point", kv.render());
            }
        }
        certified = false;  // pointwise checks never certify
    }
    return std::make_shared<NPlecticSpace>(dim, n, omega, constant, certified);
}

/// Public view of the pairing matrix at degree k (0 <= k <= n+1).
inline ContractionMatrix contraction_matrix(const NPlecticSpace& space, int k) {
    if (k < 0 || k > space.plectic_degree() + 1)
        throw InvalidArgument("contraction_matrix degree outside 0..n+1");
    return space.pairing(k).cm;
}

namespace detail {

/// Exact solve of  i_X omega = target  for X of multivector degree k, where
/// target is homogeneous of tensor degree n+1-k with polynomial coefficients.
inline SolveOutcome solve_pairing(const NPlecticSpace& space, int k, const DiffForm& target) {
    const auto& pd = space.pairing(k);
    const int rows = pd.cm.matrix.rows;

    // collect the monomial slices of the right-hand side
    std::map<Monomial, std::vector<Rational>, MonomialOrder> slices;
    std::map<IndexTuple, int, IndexTupleOrder> row_of;
    for (std::size_t r = 0; r < pd.cm.target_basis.size(); ++r)
        row_of.emplace(pd.cm.target_basis[r], static_cast<int>(r));
    for (const auto& [t, poly] : target.components()) {
        auto it = row_of.find(t);
        if (it == row_of.end()) {
            SolveOutcome out;
            NoSolutionWitness w;
            w.multivector_degree = k;
            w.monomial = Monomial::one(space.dim());
            w.detail = "target has a component outside the pairing image degree";
            out.failure = std::move(w);
            return out;
        }
        for (const auto& [m, c] : poly.terms()) {
            auto& slice = slices[m];
            slice.resize(static_cast<std::size_t>(rows));
            slice[static_cast<std::size_t>(it->second)] = c;
        }
    }

    MultiVec x(space.dim());
    for (auto& [mono, b] : slices) {
        b.resize(static_cast<std::size_t>(rows));
        const LinearSolve ls = solve_with(pd.red, b);
        if (!ls.x) {
            SolveOutcome out;
            NoSolutionWitness w;
            w.multivector_degree = k;
            w.monomial = mono;
            w.lambda = ls.inconsistency_row;
            std::ostringstream os;
            os << "monomial slice " << mono.render() << ": the " << (space.plectic_degree() + 1 - k)
               << "-form slice lies outside the image of the degree-" << k
               << " pairing (certificate: row combination annihilating the matrix but not the slice)";
            w.detail = os.str();
            out.failure = std::move(w);
            out.kernel_dimension = static_cast<int>(pd.red.free_cols.size());
            return out;
        }
        Polynomial mono_poly(space.dim());
        mono_poly.add_term(mono, 1);
        for (std::size_t c = 0; c < ls.x->size(); ++c)
            if ((*ls.x)[c] != 0)
                x.add_term(pd.cm.domain_basis[c], (*ls.x)[c] * mono_poly);
    }
    SolveOutcome out;
    out.solution = std::move(x);
    out.kernel_dimension = static_cast<int>(pd.red.free_cols.size());
    return out;
}

}  // namespace detail

/// First fundamental equation: find X with i_X omega = -d f.  Mixed-degree f
/// is solved per homogeneous component (the combined X is the sum).
inline SolveOutcome solve_semi_hamiltonian(const NPlecticSpace& space, const DiffForm& f) {
    if (!space.constant_coefficients())
        throw NonConstantOmega("solve_semi_hamiltonian requires constant-coefficient omega");
    if (f.dim() != space.dim()) throw DimensionMismatch("form dimension mismatch");
    MultiVec x(space.dim());
    int kernel_dim = 0;
    for (const auto& part : f.homogeneous_parts()) {
        const int r = part.degree();
        const DiffForm rhs = -exterior_derivative(part);
        const int k = space.plectic_degree() - r;
        if (k < 0) {
            if (rhs.is_zero()) continue;  // closed overdegree component: X = 0 works
            SolveOutcome out;
            NoSolutionWitness w;
            w.multivector_degree = k;
            w.monomial = Monomial::one(space.dim());
            w.detail = "component of tensor degree " + std::to_string(r) +
                       " is not closed and would need a multivector of negative degree";
            out.failure = std::move(w);
            return out;
        }
        SolveOutcome part_out = detail::solve_pairing(space, k, rhs);
        if (!part_out.ok()) return part_out;
        x += *part_out.solution;
        kernel_dim += part_out.kernel_dimension;
    }
    SolveOutcome out;
    out.solution = std::move(x);
    out.kernel_dimension = kernel_dim;
    return out;
}

/// Second fundamental equation: find Y with i_Y omega = -f.
inline SolveOutcome solve_hamiltonian(const NPlecticSpace& space, const DiffForm& f) {
    if (!space.constant_coefficients())
        throw NonConstantOmega("solve_hamiltonian requires constant-coefficient omega");
    if (f.dim() != space.dim()) throw DimensionMismatch("form dimension mismatch");
    MultiVec y(space.dim());
    int kernel_dim = 0;
    for (const auto& part : f.homogeneous_parts()) {
        const int r = part.degree();
        const int k = space.plectic_degree() + 1 - r;
        if (k < 0) {
            SolveOutcome out;
            NoSolutionWitness w;
            w.multivector_degree = k;
            w.monomial = Monomial::one(space.dim());
            w.detail = "tensor degree " + std::to_string(r) + " exceeds n+1 = " +
                       std::to_string(space.plectic_degree() + 1) +
                       "; no multivector can contract omega to it";
            out.failure = std::move(w);
            return out;
        }
        SolveOutcome part_out = detail::solve_pairing(space, k, -part);
        if (!part_out.ok()) return part_out;
        y += *part_out.solution;
        kernel_dim += part_out.kernel_dimension;
    }
    SolveOutcome out;
    out.solution = std::move(y);
    out.kernel_dimension = kernel_dim;
    return out;
}

/// Run both solvers and bundle the results.  Status is Hamiltonian iff both
/// succeed, semi-Hamiltonian iff only the first does.
inline HamiltonianForm classify(const NPlecticSpace& space, const DiffForm& f) {
    HamiltonianForm hf;
    hf.f = f;
    SolveOutcome semi = solve_semi_hamiltonian(space, f);
    SolveOutcome ham = solve_hamiltonian(space, f);
    if (semi.ok())
        hf.semi_associate = std::move(*semi.solution);
    else
        hf.semi_failure = std::move(semi.failure);
    if (ham.ok())
        hf.ham_associate = std::move(*ham.solution);
    else
        hf.ham_failure = std::move(ham.failure);
    if (hf.semi_associate && hf.ham_associate)
        hf.status = HamStatus::Hamiltonian;
    else if (hf.semi_associate)
        hf.status = HamStatus::SemiHamiltonian;
    else
        hf.status = HamStatus::Neither;
    return hf;
}

/// Basis of constant multivector fields of degree k annihilating omega.
/// (For constant omega the full polynomial-coefficient kernel is the module
/// generated by these over the function ring.)
inline std::vector<MultiVec> kernel_basis(const NPlecticSpace& space, int k) {
    if (k < 0) throw InvalidArgument("kernel degree must be >= 0");
    if (k > space.dim()) return {};
    const auto& pd = space.pairing(k);
    std::vector<MultiVec> out;
    for (const auto& v : nullspace_basis(pd.red)) {
        MultiVec kv(space.dim());
        for (std::size_t c = 0; c < v.size(); ++c)
            if (v[c] != 0) kv.add_term(pd.cm.domain_basis[c], Polynomial::constant(space.dim(), v[c]));
        out.push_back(std::move(kv));
    }
    return out;
}

struct KernelPropertyResult {
    bool ok = true;
    std::string witness;  // rendered offending kernel element and contraction
};

/// ker(omega) subset ker(f): every kernel basis element of every degree up to
/// the largest tensor degree of f must contract f to zero.
inline KernelPropertyResult kernel_property_check(const NPlecticSpace& space,
                                                  const HamiltonianForm& hf) {
    KernelPropertyResult res;
    const auto degs = hf.f.degrees();
    const int max_deg = degs.empty() ? 0 : degs.back();
    for (int k = 1; k <= max_deg; ++k) {
        for (const auto& xi : kernel_basis(space, k)) {
            const DiffForm c = contraction(xi, hf.f);
            if (!c.is_zero()) {
                res.ok = false;
                res.witness = "kernel element " + xi.render() + " contracts f to " + c.render();
                return res;
            }
        }
    }
    return res;
}

/// dg wedge omega = 0: membership in the scalar algebra acting on
/// Hamiltonian forms.
inline bool is_nplectic_function(const NPlecticSpace& space, const Polynomial& g) {
    DiffForm g0(space.dim());
    if (!g.is_zero()) g0.add_term({}, g);
    return wedge(exterior_derivative(g0), space.omega()).is_zero();
}

struct ModuleActionResult {
    HamiltonianForm result;
    /// per homogeneous component of f, the sign c for which
    /// g*X + c * schouten(g, Y) satisfied the first fundamental equation
    std::vector<int> sign_variants;
    std::string note;
};

/// Scale a Hamiltonian form by a function from the scalar algebra.  The
/// Hamiltonian associate g*Y always works; the semi-associate candidate
/// g*X + c*schouten(g, Y) has an orientation-dependent sign that is resolved
/// per call by substitution and recorded (never hard-coded).
inline ModuleActionResult module_action(const NPlecticSpace& space, const Polynomial& g,
                                        const HamiltonianForm& hf) {
    if (!is_nplectic_function(space, g))
        throw NotNPlecticFunction("scalar is not in the pairing-form function algebra: d(" +
                                  g.render() + ") ^ omega != 0");
    if (!hf.is_hamiltonian())
        throw UnsolvedArgument("module_action requires a Hamiltonian argument");

    ModuleActionResult out;
    const DiffForm gf = g * hf.f;
    out.result.f = gf;

    MultiVec g_as_field(space.dim());
    if (!g.is_zero()) g_as_field.add_term({}, g);

    // Hamiltonian associate: contraction is function-linear in the field slot
    MultiVec Y = g * (*hf.ham_associate);
    if (contraction(Y, space.omega()) != -gf)
        throw Error("internal: g*Y failed the second fundamental equation");
    out.result.ham_associate = std::move(Y);

    // semi associate, per homogeneous component of f
    MultiVec W_total(space.dim());
    bool all_ok = true;
    for (const auto& part : hf.f.homogeneous_parts()) {
        const int r = part.degree();
        const MultiVec Xr =
            hf.semi_associate->degree_part(static_cast<int>(space.sym_degree(r)));
        const MultiVec Yr =
            hf.ham_associate->degree_part(static_cast<int>(space.sym_degree(r)) + 1);
        const DiffForm target = -exterior_derivative(g * part);
        const MultiVec bracket_term = schouten(g_as_field, Yr);
        bool resolved = false;
        for (int c : {+1, -1}) {
            MultiVec W = g * Xr;
            W += (c == 1) ? bracket_term : -bracket_term;
            if (contraction(W, space.omega()) == target) {
                W_total += W;
                out.sign_variants.push_back(c);
                resolved = true;
                break;
            }
        }
        if (!resolved) {
            all_ok = false;
            out.note = "no sign variant of g*X +/- schouten(g, Y) satisfied the first "
                       "fundamental equation on the degree-" + std::to_string(r) + " component";
            break;
        }
    }
    if (all_ok) {
        out.result.semi_associate = std::move(W_total);
        out.result.status = HamStatus::Hamiltonian;
    } else {
        // fall back to the solver so the caller still gets an honest result
        SolveOutcome semi = solve_semi_hamiltonian(space, gf);
        if (semi.ok()) {
            out.result.semi_associate = std::move(*semi.solution);
            out.result.status = HamStatus::Hamiltonian;
        } else {
            out.result.semi_failure = std::move(semi.failure);
            out.result.status = HamStatus::Neither;
        }
    }
    return out;
}

/// Product of two Hamiltonian functions (tensor degree 0).  The constructed
/// associates f1*X2 + f2*X1 and f1*Y2 are verified by substitution.
inline HamiltonianForm product_of_hamiltonian_functions(const NPlecticSpace& space,
                                                        const HamiltonianForm& a,
                                                        const HamiltonianForm& b) {
    for (const auto* hf : {&a, &b}) {
        const auto degs = hf->f.degrees();
        if (!(degs.empty() || (degs.size() == 1 && degs.front() == 0)))
            throw InvalidArgument("product_of_hamiltonian_functions needs tensor degree 0");
        if (!hf->is_hamiltonian())
            throw UnsolvedArgument("product_of_hamiltonian_functions needs Hamiltonian inputs");
    }
    const Polynomial f1 = a.f.component({});
    const Polynomial f2 = b.f.component({});
    HamiltonianForm out;
    out.f = DiffForm(space.dim());
    const Polynomial prod = f1 * f2;
    if (!prod.is_zero()) out.f.add_term({}, prod);
    MultiVec X = f1 * (*b.semi_associate) + f2 * (*a.semi_associate);
    MultiVec Y = f1 * (*b.ham_associate);
    if (contraction(X, space.omega()) != -exterior_derivative(out.f))
        throw Error("internal: product semi-associate failed substitution");
    if (contraction(Y, space.omega()) != -out.f)
        throw Error("internal: product Hamiltonian associate failed substitution");
    out.semi_associate = std::move(X);
    out.ham_associate = std::move(Y);
    out.status = HamStatus::Hamiltonian;
    return out;
}

}  // namespace nplectic
