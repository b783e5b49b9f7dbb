#include <catch2/catch_amalgamated.hpp>

#include "hcme/group.hpp"
#include "hcme/sampling.hpp"

using namespace hcme;

namespace {

// independent oracle: 20-term matrix exponential series
Mat2<Complex> exp_series(const LieAlgebraElement& x, Complex tau) {
    Mat2<Complex> m{x.h * tau, x.e * tau, x.f * tau, -x.h * tau};
    Mat2<Complex> acc{1.0, 0.0, 0.0, 1.0};
    Mat2<Complex> pw{1.0, 0.0, 0.0, 1.0};
    double fact = 1.0;
    for (int k = 1; k <= 20; ++k) {
        pw = pw * m;
        fact *= k;
        Complex c(1.0 / fact);
        acc.a += pw.a * c;
        acc.b += pw.b * c;
        acc.c += pw.c * c;
        acc.d += pw.d * c;
    }
    return acc;
}

double dist(const GroupElement& g, const Mat2<Complex>& m) { return max_abs_diff(g.mat(), m); }

} // namespace

TEST_CASE("compose: identity, adjugate inverse, one-parameter additivity") {
    Rng rng(11);
    GroupElement g = sample_group(rng);
    CHECK(dist(compose(GroupElement::identity(), g), g.mat()) < 1e-15);
    CHECK(dist(compose(g, g.inverse()), GroupElement::identity().mat()) < 1e-12);
    CHECK(dist(compose(GroupElement::hyperbolic(0.3), GroupElement::hyperbolic(0.5)),
               GroupElement::hyperbolic(0.8).mat()) < 1e-12);
}

TEST_CASE("compose is associative on random triples") {
    Rng rng(12);
    for (int i = 0; i < 30; ++i) {
        GroupElement a = sample_group(rng), b = sample_group(rng), c = sample_group(rng);
        CHECK(dist(compose(compose(a, b), c), compose(a, compose(b, c)).mat()) < 1e-12);
    }
}

TEST_CASE("determinant is re-checked after long composition chains") {
    GroupElement bad{Complex(2.0), Complex(0.0), Complex(0.0), Complex(1.0)}; // det 2
    bad.chain = 100;
    CHECK_THROWS_AS(compose(bad, GroupElement::identity()), internal_check_error);
    GroupElement ok = GroupElement::hyperbolic(0.01);
    ok.chain = 100;
    CHECK_NOTHROW(compose(ok, GroupElement::identity()));
}

TEST_CASE("exp_algebra closed form") {
    CHECK(dist(exp_algebra(LieAlgebraElement::H(), 0.0), GroupElement::identity().mat()) == 0.0);
    GroupElement d = exp_algebra(LieAlgebraElement::H(), 0.8);
    CHECK(std::abs(d.a - std::exp(Complex(0.8))) < 1e-14);
    CHECK(std::abs(d.d - std::exp(Complex(-0.8))) < 1e-14);
    CHECK(std::abs(d.b) + std::abs(d.c) == 0.0);

    // rotation generator: exp(theta(E-F)) against the series oracle
    LieAlgebraElement ef = LieAlgebraElement::E() - LieAlgebraElement::F();
    for (double th : {0.1, 0.9, 2.0}) {
        CHECK(dist(exp_algebra(ef, th), exp_series(ef, th)) < 1e-12);
        CHECK(std::abs(exp_algebra(ef, th).a - Complex(std::cos(th))) < 1e-13);
        CHECK(std::abs(exp_algebra(ef, th).b - Complex(std::sin(th))) < 1e-13);
    }
}

TEST_CASE("exp_algebra agrees with the series oracle on random directions") {
    Rng rng(13);
    for (int i = 0; i < 25; ++i) {
        LieAlgebraElement x{rng.complex_in(-1, 1, -0.5, 0.5), rng.complex_in(-1, 1, -0.5, 0.5),
                            rng.complex_in(-1, 1, -0.5, 0.5)};
        Complex tau = rng.complex_in(-1, 1, -0.5, 0.5);
        CHECK(dist(exp_algebra(x, tau), exp_series(x, tau)) < 1e-12);
    }
}

TEST_CASE("exp_algebra satisfies the flow property") {
    Rng rng(14);
    for (int i = 0; i < 20; ++i) {
        LieAlgebraElement x{rng.complex_in(-1, 1, 0, 0), rng.complex_in(-1, 1, 0, 0),
                            rng.complex_in(-1, 1, 0, 0)};
        double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
        CHECK(dist(compose(exp_algebra(x, s), exp_algebra(x, t)), exp_algebra(x, s + t).mat()) <
              1e-12);
    }
}

TEST_CASE("bracket table of the H/E/F basis") {
    auto H = LieAlgebraElement::H(), E = LieAlgebraElement::E(), F = LieAlgebraElement::F();
    auto he = bracket(H, E), hf = bracket(H, F), ef = bracket(E, F);
    CHECK(std::abs(he.e - Complex(2.0)) < 1e-14);
    CHECK(std::abs(he.h) + std::abs(he.f) < 1e-14);
    CHECK(std::abs(hf.f - Complex(-2.0)) < 1e-14);
    CHECK(std::abs(ef.h - Complex(1.0)) < 1e-14);
}

TEST_CASE("cartan_decompose canonical cases") {
    CartanCoordinates id = cartan_decompose(GroupElement::identity());
    CHECK(id.theta1 == 0.0);
    CHECK(id.t == 0.0);
    CHECK(id.theta2 == 0.0);

    CartanCoordinates ax = cartan_decompose(GroupElement::hyperbolic(1.2));
    CHECK(std::abs(ax.theta1) < 1e-12);
    CHECK(std::abs(ax.t - 1.2) < 1e-12);
    CHECK(std::abs(ax.theta2) < 1e-12);
}

TEST_CASE("cartan_decompose round trips") {
    GroupElement g = compose(GroupElement::rotation(0.4),
                             compose(GroupElement::hyperbolic(0.9), GroupElement::rotation(1.1)));
    CartanCoordinates cc = cartan_decompose(g);
    CHECK(max_abs_diff(cc.reconstruct().mat(), g.mat()) < 1e-10);
    // already-canonical coordinates come back unchanged
    CHECK(std::abs(cc.theta1 - 0.4) < 1e-10);
    CHECK(std::abs(cc.t - 0.9) < 1e-10);
    CHECK(std::abs(cc.theta2 - 1.1) < 1e-10);

    Rng rng(15);
    for (int i = 0; i < 40; ++i) {
        GroupElement h = sample_group(rng, 1e-4, 2.2);
        CartanCoordinates c2 = cartan_decompose(h);
        CHECK(c2.theta1 >= 0.0);
        CHECK(c2.theta1 < kPi);
        CHECK(c2.t >= 0.0);
        CHECK(max_abs_diff(c2.reconstruct().mat(), h.mat()) < 1e-10);
    }
}

TEST_CASE("jet_lift with no directions embeds the element") {
    Rng rng(16);
    GroupElement g = sample_group(rng);
    JetMat jm = jet_lift(g, {});
    CHECK(std::abs(jm.a.value() - g.a) < 1e-15);
    CHECK(std::abs(jm.d.value() - g.d) < 1e-15);
}

TEST_CASE("jet_lift of the identity along H carries the exponential series") {
    JetMat jm = jet_lift(GroupElement::identity(), {{Side::left, LieAlgebraElement::H()}});
    // order 0: identity; order 1: H; order 2: H^2/2 = I/2
    CHECK(std::abs(jm.a.value() - Complex(1.0)) < 1e-15);
    CHECK(std::abs(jm.a.first_order(0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(jm.d.first_order(0) - Complex(-1.0)) < 1e-15);
    CHECK(std::abs(jm.b.first_order(0)) < 1e-15);
    CHECK(std::abs(jm.a.coeff({2}) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(jm.d.coeff({2}) - Complex(0.5)) < 1e-15);
}

TEST_CASE("jet_lift first-order coefficients match central finite differences") {
    Rng rng(17);
    GroupElement g = sample_group(rng);
    JetMat jm = jet_lift(g, {{Side::left, LieAlgebraElement::E()}});
    const double h = 1e-6;
    GroupElement plus = compose(exp_algebra(LieAlgebraElement::E(), h), g);
    GroupElement minus = compose(exp_algebra(LieAlgebraElement::E(), -h), g);
    Complex fd = (plus.a - minus.a) / (2.0 * h);
    CHECK(std::abs(jm.a.first_order(0) - fd) < 1e-8);
    // and against the exact derivative (E*g)_{11} = g.c
    CHECK(std::abs(jm.a.first_order(0) - g.c) < 1e-14);
}

TEST_CASE("jet_lift rejects over-budget direction lists") {
    std::vector<LiftDirection> dirs(9, {Side::left, LieAlgebraElement::H()});
    CHECK_THROWS_AS(jet_lift(GroupElement::identity(), dirs), budget_error);
}
