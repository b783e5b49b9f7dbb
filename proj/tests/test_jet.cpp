#include <catch2/catch_amalgamated.hpp>

#include "hcme/jet.hpp"
#include "hcme/sampling.hpp"

using namespace hcme;

namespace {

Jet random_jet(const JetShape& shape, Rng& rng, bool unit_base = false) {
    Jet j(shape, unit_base ? Complex(1.0 + rng.uniform(), rng.uniform() - 0.5)
                           : rng.complex_in(-1, 1, -1, 1));
    for (int i = 0; i < shape.vars; ++i) {
        Jet v = Jet::variable(shape, i, Complex(0.0));
        j += v * rng.complex_in(-1, 1, -1, 1);
    }
    // sprinkle a higher-order coefficient through a product
    if (shape.vars >= 2) j += Jet::variable(shape, 0, Complex(0.0)) *
                              Jet::variable(shape, 1, Complex(0.0)) *
                              rng.complex_in(-1, 1, -1, 1);
    return j;
}

double coeff_distance(const Jet& x, const Jet& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.coefficients().size(); ++i)
        m = std::max(m, std::abs(x.coefficients()[i] - y.coefficients()[i]));
    return m;
}

} // namespace

TEST_CASE("ring axioms hold on random dense jets") {
    const JetShape& shape = JetShape::get(3, 3, false);
    Rng rng(421);
    for (int trial = 0; trial < 20; ++trial) {
        Jet a = random_jet(shape, rng);
        Jet b = random_jet(shape, rng);
        Jet c = random_jet(shape, rng);
        CHECK(coeff_distance((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(coeff_distance(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(coeff_distance(a * b, b * a) < 1e-12);
    }
}

TEST_CASE("ring axioms hold on random multilinear jets") {
    const JetShape& shape = JetShape::get(4, 4, true);
    Rng rng(87);
    for (int trial = 0; trial < 20; ++trial) {
        Jet a = random_jet(shape, rng);
        Jet b = random_jet(shape, rng);
        Jet c = random_jet(shape, rng);
        CHECK(coeff_distance((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(coeff_distance(a * (b + c), a * b + a * c) < 1e-12);
    }
}

TEST_CASE("analytic composition at order zero reduces to the scalar function") {
    const JetShape& shape = JetShape::get(0, 0, false);
    Jet j(shape, Complex(0.7, 0.3));
    CHECK(std::abs(exp_analytic(j).value() - std::exp(Complex(0.7, 0.3))) < 1e-15);
    CHECK(std::abs(log_analytic(j).value() - std::log(Complex(0.7, 0.3))) < 1e-15);
    CHECK(std::abs(pow_analytic(j, Complex(0.5, -1.2)).value() -
                   std::pow(Complex(0.7, 0.3), Complex(0.5, -1.2))) < 1e-15);
}

TEST_CASE("power of 1 + eps reproduces binomial coefficients") {
    const JetShape& shape = JetShape::get(1, 4, false);
    Complex alpha(0.75, -0.4);
    Jet j = Jet::variable(shape, 0, Complex(1.0));
    Jet p = pow_analytic(j, alpha);
    Complex expect(1.0);
    for (int k = 0; k <= 4; ++k) {
        CHECK(std::abs(p.coefficients()[std::size_t(k)] - expect) < 1e-14);
        expect *= (alpha - Complex(double(k))) / Complex(double(k + 1));
    }
}

TEST_CASE("reciprocal and exp/log invert") {
    Rng rng(5);
    const JetShape& shape = JetShape::get(2, 4, false);
    for (int trial = 0; trial < 10; ++trial) {
        Jet j = random_jet(shape, rng, true);
        Jet one(shape, Complex(1.0));
        CHECK(coeff_distance(j * reciprocal(j), one) < 1e-13);
        CHECK(coeff_distance(exp_analytic(log_analytic(j)), j) < 1e-12);
    }
}

TEST_CASE("mixed first-order coefficient distributes over products of variables") {
    // d/de1 d/de2 of (a + e1)(b + e2) = 1; multilinear carrier
    const JetShape& shape = JetShape::get(2, 2, true);
    Jet x = Jet::variable(shape, 0, Complex(2.0, 1.0));
    Jet y = Jet::variable(shape, 1, Complex(-0.5, 0.25));
    CHECK(std::abs((x * y).mixed_all() - Complex(1.0)) < 1e-15);
    CHECK(std::abs((x * x * y).mixed_all() - Complex(2.0) * Complex(2.0, 1.0)) < 1e-14);
}

TEST_CASE("jet budget limits are enforced") {
    CHECK_THROWS_AS(JetShape::get(9, 1, true), budget_error);
}
