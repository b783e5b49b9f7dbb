#ifndef HCME_SPECIAL_FUNCTIONS_HPP
#define HCME_SPECIAL_FUNCTIONS_HPP

// Gauss hypergeometric series and Legendre functions of complex degree.
// This is the analytic oracle the quadrature pipeline is checked against;
// nothing in the pipeline itself calls into here.
//
// Series policy: direct power series for |z| <= 0.75, Pfaff transform
// z -> z/(z-1) when that lands in the 0.75 disk, otherwise refuse.
// Terminating series (a or b a nonpositive integer) are summed directly
// for any z. Stop when |term| < 1e-17 |sum| three times in a row.

#include <cmath>
#include <utility>

#include "hcme/scalar.hpp"

namespace hcme {

namespace detail {

inline bool is_nonpositive_integer(const Complex& z, int* n = nullptr) {
    if (z.imag() != 0.0) return false;
    double r = z.real();
    if (r > 0.0) return false;
    double nearest = std::nearbyint(r);
    if (r != nearest) return false;
    if (n) *n = int(-nearest);
    return true;
}

/// plain power series sum_{k} (a)_k (b)_k / (c)_k z^k / k!; caller has
/// checked convergence. max_terms bounds the terminating case too.
inline Complex gauss_series(Complex a, Complex b, Complex c, Complex z, int max_terms) {
    Complex term(1.0), sum(1.0);
    int quiet = 0;
    for (int k = 0; k < max_terms; ++k) {
        Complex dk{double(k)};
        term *= (a + dk) * (b + dk) * z / ((c + dk) * (dk + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) {
            if (++quiet >= 3) return sum;
        } else {
            quiet = 0;
        }
    }
    throw no_convergent_regime_error("2F1 series did not converge in 10000 terms");
}

} // namespace detail

inline Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z) {
    // canonical (a,b) order: the a<->b symmetry then holds bit-for-bit in
    // every regime, including the Pfaff branch
    if (b.real() < a.real() || (b.real() == a.real() && b.imag() < a.imag())) std::swap(a, b);
    int cn = 0;
    if (detail::is_nonpositive_integer(c, &cn))
        throw parameter_degenerate_error("2F1 with nonpositive integer c");
    int na = 0, nb = 0;
    bool ta = detail::is_nonpositive_integer(a, &na);
    bool tb = detail::is_nonpositive_integer(b, &nb);
    if (ta || tb) {
        // terminating polynomial: exact for any z
        int terms = ta && tb ? std::min(na, nb) : (ta ? na : nb);
        return detail::gauss_series(a, b, c, z, terms + 4);
    }
    if (std::abs(z) <= 0.75) return detail::gauss_series(a, b, c, z, 10000);
    Complex w = z / (z - Complex(1.0));
    if (std::abs(w) <= 0.75) {
        // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
        return std::pow(Complex(1.0) - z, -a) * detail::gauss_series(a, c - b, c, w, 10000);
    }
    throw no_convergent_regime_error("2F1 argument outside the series policy");
}

/// P_nu(z) = 2F1(-nu, nu+1; 1; (1-z)/2); z off the cut (-inf, -1]
inline Complex legendre_P(Complex nu, Complex z) {
    return gauss_2f1(-nu, nu + Complex(1.0), Complex(1.0), (Complex(1.0) - z) * 0.5);
}

/// (z^2-1) P'_nu(z) = nu (z P_nu(z) - P_{nu-1}(z)); test oracles use this
/// for derivative cross-checks.
inline Complex legendre_P_derivative(Complex nu, Complex z) {
    Complex num = nu * (z * legendre_P(nu, z) - legendre_P(nu - Complex(1.0), z));
    return num / (z * z - Complex(1.0));
}

} // namespace hcme

#endif
