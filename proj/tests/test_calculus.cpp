#include <catch2/catch_amalgamated.hpp>

#include <nplectic/graded.hpp>
#include <nplectic/random_gen.hpp>
#include <nplectic/tensor.hpp>

using namespace nplectic;

namespace {

constexpr int kInstances = 220;

struct Draw {
    MultiVec X, Y, Z;
    DiffForm alpha;
    int r, s, t, a;
};

/// homogeneous multivectors of degree 1..3 and a form of degree 0..4 in R^4
Draw draw(Rng& rng) {
    const int dim = 4;
    Draw d{MultiVec(dim), MultiVec(dim), MultiVec(dim), DiffForm(dim), 0, 0, 0, 0};
    d.r = static_cast<int>(rng.uniform(1, 3));
    d.s = static_cast<int>(rng.uniform(1, 3));
    d.t = static_cast<int>(rng.uniform(1, 3));
    d.a = static_cast<int>(rng.uniform(0, 4));
    d.X = random_multivec(rng, dim, d.r);
    d.Y = random_multivec(rng, dim, d.s);
    d.Z = random_multivec(rng, dim, d.t);
    d.alpha = random_form(rng, dim, d.a);
    return d;
}

DiffForm dx(int dim, std::vector<int> ix) {
    DiffForm f(dim);
    f.add_term(std::move(ix), Polynomial::constant(dim, 1));
    return f;
}

MultiVec at(int dim, std::vector<int> ix) {
    MultiVec v(dim);
    v.add_term(std::move(ix), Polynomial::constant(dim, 1));
    return v;
}

}  // namespace

TEST_CASE("tensor term canonicalization") {
    const int dim = 4;
    DiffForm f(dim);
    // unsorted indices pick up the permutation sign
    f.add_term({3, 1}, Polynomial::constant(dim, 1));
    CHECK(f == Rational(-1) * dx(dim, {1, 3}));
    // repeated indices vanish
    DiffForm g(dim);
    g.add_term({2, 2}, Polynomial::constant(dim, 5));
    CHECK(g.is_zero());
}

TEST_CASE("wedge is graded commutative and associative") {
    Rng rng(101);
    for (int c = 0; c < 60; ++c) {
        const Draw d = draw(rng);
        CHECK(wedge(d.X, d.Y) == Rational(sign_e2(d.r, d.s)) * wedge(d.Y, d.X));
        CHECK(wedge(wedge(d.X, d.Y), d.Z) == wedge(d.X, wedge(d.Y, d.Z)));
    }
    // explicit value
    const int dim = 3;
    CHECK(wedge(dx(dim, {2}), dx(dim, {1})) == Rational(-1) * dx(dim, {1, 2}));
}

TEST_CASE("exterior derivative squares to zero") {
    Rng rng(103);
    for (int c = 0; c < kInstances; ++c) {
        const int dim = static_cast<int>(rng.uniform(2, 5));
        const DiffForm f = random_form(rng, dim, static_cast<int>(rng.uniform(0, dim)));
        CHECK(exterior_derivative(exterior_derivative(f)).is_zero());
    }
    // a hand value: d(x2 dx1) = dx2 ^ dx1 = -dx1^dx2
    const int dim = 2;
    DiffForm f(dim);
    f.add_term({1}, Polynomial::variable(dim, 2));
    CHECK(exterior_derivative(f) == Rational(-1) * dx(dim, {1, 2}));
}

TEST_CASE("contraction composes factor by factor") {
    Rng rng(107);
    for (int c = 0; c < kInstances; ++c) {
        const Draw d = draw(rng);
        // i_{X ^ Y} a = i_X (i_Y a): the LAST wedge factor contracts first
        CHECK(contraction(wedge(d.X, d.Y), d.alpha) ==
              contraction(d.X, contraction(d.Y, d.alpha)));
    }
    // positional sign of a single contraction
    const int dim = 3;
    CHECK(contraction(at(dim, {2}), dx(dim, {1, 2, 3})) == Rational(-1) * dx(dim, {1, 3}));
    CHECK(contraction(at(dim, {1}), dx(dim, {1, 2, 3})) == dx(dim, {2, 3}));
    // degree-0 contraction is multiplication
    MultiVec scalar(dim);
    scalar.add_term({}, Polynomial::variable(dim, 1));
    CHECK(contraction(scalar, dx(dim, {2})) == Polynomial::variable(dim, 1) * dx(dim, {2}));
}

TEST_CASE("lie derivative satisfies the four compatibility rules") {
    Rng rng(109);
    int checked = 0;
    for (int c = 0; c < kInstances; ++c) {
        const Draw d = draw(rng);
        const MultiVec& X = d.X;
        const MultiVec& Y = d.Y;
        const DiffForm& alpha = d.alpha;

        // d L_X = (-1)^{r-1} L_X d
        CHECK(exterior_derivative(lie_derivative(X, alpha)) ==
              Rational(sign_e(d.r - 1)) * lie_derivative(X, exterior_derivative(alpha)));

        // i_{[X,Y]} = i_Y L_X - (-1)^{(r-1)s} L_X i_Y
        CHECK(contraction(schouten(X, Y), alpha) ==
              contraction(Y, lie_derivative(X, alpha)) -
                  Rational(sign_e2(d.r - 1, d.s)) *
                      lie_derivative(X, contraction(Y, alpha)));

        // L_{[X,Y]} = L_Y L_X - (-1)^{(r-1)(s-1)} L_X L_Y
        CHECK(lie_derivative(schouten(X, Y), alpha) ==
              lie_derivative(Y, lie_derivative(X, alpha)) -
                  Rational(sign_e2(d.r - 1, d.s - 1)) *
                      lie_derivative(X, lie_derivative(Y, alpha)));

        // L_{X^Y} = (-1)^r i_X L_Y + L_X i_Y
        CHECK(lie_derivative(wedge(X, Y), alpha) ==
              Rational(sign_e(d.r)) * contraction(X, lie_derivative(Y, alpha)) +
                  lie_derivative(X, contraction(Y, alpha)));
        ++checked;
    }
    CHECK(checked == kInstances);
}

TEST_CASE("schouten bracket identities") {
    Rng rng(113);
    for (int c = 0; c < kInstances; ++c) {
        const Draw d = draw(rng);
        const MultiVec& X = d.X;
        const MultiVec& Y = d.Y;
        const MultiVec& Z = d.Z;
        const int r = d.r, s = d.s, t = d.t;

        // graded antisymmetry
        CHECK(schouten(X, Y) ==
              Rational(-sign_e2(r - 1, s - 1)) * schouten(Y, X));

        // Leibniz rule in the second slot
        CHECK(schouten(X, wedge(Y, Z)) ==
              wedge(Y, schouten(X, Z)) +
                  Rational(sign_e2(r - 1, t)) * wedge(schouten(X, Y), Z));

        // graded Jacobi identity, Leibniz form
        CHECK(schouten(schouten(X, Y), Z) ==
              schouten(X, schouten(Y, Z)) +
                  Rational(sign_e2(s - 1, t - 1)) * schouten(schouten(X, Z), Y));
    }
}

TEST_CASE("schouten bracket on vector fields is the reversed commutator") {
    const int dim = 2;
    // A = x1 @1, B = @1: schouten(A,B)(g) = B(A(g)) - A(B(g))
    MultiVec A(dim), B(dim);
    A.add_term({1}, Polynomial::variable(dim, 1));
    B.add_term({1}, Polynomial::constant(dim, 1));
    // B(A(g)) - A(B(g)) for g = x1: B(x1 * 1) = 1; A(1) = 0 => bracket(g) = 1 => bracket = @1
    CHECK(schouten(A, B) == at(dim, {1}));

    // degree-0 slot: schouten(g, Y) for scalar g is minus the "gradient pairing"
    Rng rng(127);
    for (int c = 0; c < 40; ++c) {
        const Polynomial g = random_polynomial(rng, dim, 2, 2);
        MultiVec gs(dim);
        if (!g.is_zero()) gs.add_term({}, g);
        const MultiVec Y = random_multivec(rng, dim, 1);
        // on a degree-0 element the bracket reduces to Y acting on g
        MultiVec expect(dim);
        DiffForm g0(dim);
        if (!g.is_zero()) g0.add_term({}, g);
        const DiffForm applied = contraction(Y, exterior_derivative(g0));
        if (!applied.is_zero()) expect.add_term({}, applied.component({}));
        CHECK(schouten(gs, Y) == expect);
    }
}

TEST_CASE("lie derivative explicit value") {
    // L_{@1}(x1 dx2) = dx2
    const int dim = 2;
    DiffForm f(dim);
    f.add_term({2}, Polynomial::variable(dim, 1));
    CHECK(lie_derivative(at(dim, {1}), f) == dx(dim, {2}));
    // L_X of a function g is i_X dg for vector fields
    Rng rng(131);
    for (int c = 0; c < 40; ++c) {
        const MultiVec X = random_multivec(rng, 3, 1);
        DiffForm g(3);
        g.add_term({}, random_polynomial(rng, 3, 2, 2));
        CHECK(lie_derivative(X, g) == contraction(X, exterior_derivative(g)));
    }
}
