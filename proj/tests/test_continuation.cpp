#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "hcme/continuation.hpp"
#include "hcme/special_functions.hpp"

using namespace hcme;
using namespace hcme_test;

namespace {

EnvelopingWord word_of(std::initializer_list<WordLetter> ls) {
    return EnvelopingWord::monomial(Complex(1.0), std::vector<WordLetter>(ls));
}

} // namespace

TEST_CASE("complex Cartan points validate the window at construction") {
    CHECK_NOTHROW(ComplexCartanPoint(Complex{0.7, 1.13}));
    CHECK_NOTHROW(ComplexCartanPoint(Complex{0.3, -1.3}));
    // pure imaginary parameter heading for i pi/2: rejected past the window
    CHECK_THROWS_AS(ComplexCartanPoint(Complex{0.0, 1.55}), branch_violation_error);
    CHECK_THROWS_AS(ComplexCartanPoint(Complex{1.0, -1.52}), branch_violation_error);
}

TEST_CASE("complexified spherical restricts to the real group") {
    Complex s{0.4, 0.7};
    for (double t : {0.3, 1.0, 1.7}) {
        Complex crown = complexified_spherical(s, ComplexCartanPoint(Complex{t, 0.0}));
        Complex real_group = spherical_function(s, GroupElement::hyperbolic(t), 2048);
        CHECK(std::abs(crown - real_group) < 1e-12 * std::max(1.0, std::abs(real_group)));
    }
}

TEST_CASE("complexified spherical matches the Legendre oracle in the window") {
    // frozen value at s = 0.9i, t = 0.7 + 1.13i
    Complex v = complexified_spherical({0.0, 0.9}, ComplexCartanPoint(Complex{0.7, 1.13}));
    CHECK(std::abs(v - Complex(1.1423395838322127469, -0.48649174007657042119)) < 1e-9);

    Rng rng(501);
    for (int i = 0; i < 12; ++i) {
        Complex s = rng.complex_in(-1.0, 1.0, -1.2, 1.2);
        Complex t{rng.uniform(0.15, 1.0), rng.uniform(-1.0, 1.0) * kCrownWindow};
        Complex quad = complexified_spherical(s, ComplexCartanPoint(t));
        Complex oracle = legendre_P(s - Complex(0.5), std::cosh(t));
        CHECK(std::abs(quad - oracle) < 1e-9 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("complexified spherical is independent of grid refinement") {
    Complex s{0.6, -0.8};
    ComplexCartanPoint p(Complex{0.8, 1.2});
    Complex a = complexified_spherical(s, p, 2048);
    Complex b = complexified_spherical(s, p, 4096);
    CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(a)));
}

TEST_CASE("holomorphy test accepts holomorphic functions") {
    auto constant = [](Complex) { return Complex(2.3, -0.4); };
    CHECK(holomorphy_test(constant, {0.6, 0.5}, 0.1, 16) < 1e-15);

    Complex s{0.0, 0.9};
    auto sph = [&](Complex t) { return complexified_spherical(s, ComplexCartanPoint(t)); };
    CHECK(holomorphy_test(sph, {0.6, 0.5}, 0.1, 16) < 1e-8);
}

TEST_CASE("holomorphy test rejects anti-holomorphic and singular functions") {
    Complex center{0.6, 0.5};
    auto antiholo = [](Complex t) { return std::conj(t); };
    CHECK(holomorphy_test(antiholo, center, 0.1, 16) > 1e-2);

    Complex pole = center + Complex(0.05, 0.0);
    auto singular = [&](Complex t) { return Complex(1.0) / (t - pole); };
    CHECK(holomorphy_test(singular, center, 0.1, 16) > 1e-1);

    CHECK_THROWS_AS(holomorphy_test(antiholo, {0.5, 1.36}, 0.1, 16), branch_violation_error);
}

TEST_CASE("derivative words continue holomorphically") {
    Complex s{0.35, 0.75};
    EnvelopingWord empty = EnvelopingWord::empty();
    ComplexCartanPoint p(Complex{0.5, 0.8});
    CHECK(std::abs(derivative_word_continuation(s, empty, p) - complexified_spherical(s, p)) <
          1e-13);

    // single letter at real t restricts to the real-group derivative
    EnvelopingWord single = word_of({{Side::right, LieAlgebraElement::H()}});
    ComplexCartanPoint preal(Complex{0.9, 0.0});
    SphericalOnG psi{Realization(s, Parity::even, 2048)};
    Complex real_path = lie_derivative_word(single, psi, GroupElement::hyperbolic(0.9));
    CHECK(std::abs(derivative_word_continuation(s, single, preal) - real_path) <
          1e-8 * std::max(1.0, std::abs(real_path)));

    // degree-2 word passes the mean-value probe at an interior center
    EnvelopingWord deg2 = word_of(
        {{Side::left, LieAlgebraElement::lower()}, {Side::right, LieAlgebraElement::raise()}});
    auto f = [&](Complex t) {
        return derivative_word_continuation(s, deg2, ComplexCartanPoint(t), 1024);
    };
    CHECK(holomorphy_test(f, {0.5, 0.8}, 0.1, 16) < 1e-7);
}

TEST_CASE("integrand base minimum decays toward the window edge") {
    for (double re_t : {0.3, 0.8}) {
        double prev = crown_base_min(Complex{re_t, 0.0});
        for (int k = 1; k <= 12; ++k) {
            double im = 0.49 * kPi * double(k) / 12.0;
            double cur = crown_base_min(Complex{re_t, im});
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
        CHECK(prev < 0.35); // nearly degenerate at the edge
    }
}
