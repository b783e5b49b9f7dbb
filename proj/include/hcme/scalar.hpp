#ifndef HCME_SCALAR_HPP
#define HCME_SCALAR_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "hcme/errors.hpp"

namespace hcme {

using Complex = std::complex<double>;

/// Spectral parameter of the principal series, normalized so that
/// Psi_s = Psi_{-s} and Psi_s(a(t)) = P_{s-1/2}(cosh t).
using SpectralParameter = Complex;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Principal-branch power for plain complex scalars. The jet overload
/// lives in jet.hpp; generic integrand code calls pow_analytic unqualified
/// so either resolves.
inline Complex pow_analytic(const Complex& base, const Complex& expo) {
    return std::pow(base, expo);
}

inline Complex exp_analytic(const Complex& z) { return std::exp(z); }
inline Complex log_analytic(const Complex& z) { return std::log(z); }

/// 2x2 matrix over an arbitrary commutative scalar (complex numbers or jets).
template <class S>
struct Mat2 {
    S a, b, c, d; // row-major [[a,b],[c,d]]

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    S det() const { return a * d - b * c; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
};

/// Inverse by adjugate over determinant; S is any scalar with division.
template <class S>
Mat2<S> inverse2(const Mat2<S>& m) {
    S idet = Complex(1.0) / m.det();
    Mat2<S> adj = m.adjugate();
    return {adj.a * idet, adj.b * idet, adj.c * idet, adj.d * idet};
}

/// Entry-wise maximum absolute difference (complex specialization only).
inline double max_abs_diff(const Mat2<Complex>& x, const Mat2<Complex>& y) {
    double m = std::abs(x.a - y.a);
    m = std::max(m, std::abs(x.b - y.b));
    m = std::max(m, std::abs(x.c - y.c));
    m = std::max(m, std::abs(x.d - y.d));
    return m;
}

/// Canonical text form "a+bi" with 17 significant digits, used by every
/// output file. Real part always printed; imaginary part carries its sign.
inline std::string format_complex(const Complex& z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.16e%+.16ei", z.real(), z.imag());
    return buf;
}

inline std::string format_real(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

/// Parses "1.5", "-0.5", "0.9i", "1+0.5i", "-1.2e-3-0.25i".
inline Complex parse_complex(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    double first = std::strtod(s, &end);
    if (end == s) throw config_error("cannot parse complex number: '" + text + "'");
    if (*end == '\0') return {first, 0.0};
    if (*end == 'i' && *(end + 1) == '\0') return {0.0, first};
    const char* s2 = end;
    double second = std::strtod(s2, &end);
    if (end == s2 || *end != 'i' || *(end + 1) != '\0')
        throw config_error("cannot parse complex number: '" + text + "'");
    return {first, second};
}

} // namespace hcme

#endif
