#ifndef HCME_CONTINUATION_HPP
#define HCME_CONTINUATION_HPP

// Spherical functions and derivative words at complexified Cartan
// parameter: the A-direction slice of the crown domain. The quadrature
// integrand for g = a(t) has base value cosh t + sinh t cos(phi); the
// certified window |Im t| <= 0.45 pi keeps that base off the branch cut
// (-inf, 0] with a guard band for quadrature convergence.

#include <functional>

#include "hcme/enveloping.hpp"
#include "hcme/principal_series.hpp"

namespace hcme {

constexpr double kCrownWindow = 0.45 * kPi;

/// min over the phi grid of |cosh t + sinh t cos(phi)|
inline double crown_base_min(Complex t, int phi_grid = 1024) {
    Complex ch = std::cosh(t), sh = std::sinh(t);
    double m = std::abs(ch + sh);
    for (int k = 0; k < phi_grid; ++k) {
        double c = std::cos(kTwoPi * double(k) / double(phi_grid));
        m = std::min(m, std::abs(ch + sh * c));
    }
    return m;
}

/// Complex hyperbolic parameter, validated at construction: |Im t| within
/// the window and the integrand base off the cut for every grid phi.
struct ComplexCartanPoint {
    Complex t;

    explicit ComplexCartanPoint(Complex t_, int phi_grid = 1024) : t(t_) {
        if (std::abs(t.imag()) > kCrownWindow)
            throw branch_violation_error("Im t outside the certified window |Im t| <= 0.45 pi");
        Complex ch = std::cosh(t), sh = std::sinh(t);
        for (int k = 0; k < phi_grid; ++k) {
            double c = std::cos(kTwoPi * double(k) / double(phi_grid));
            Complex base = ch + sh * c;
            if (base.real() <= 1e-12 && std::abs(base.imag()) <= 1e-12)
                throw branch_violation_error("integrand base touches the cut (-inf, 0]");
        }
    }

    GroupElement element() const { return GroupElement::hyperbolic(t); }
};

/// Psi_s at a(t) for complex t: the same quadrature as the real group,
/// principal branch of the cocycle power.
inline Complex complexified_spherical(SpectralParameter s, const ComplexCartanPoint& p, int grid = 2048) {
    Realization pi(s, Parity::even, grid);
    GroupElement ginv = GroupElement::hyperbolic(-p.t);
    return matrix_element_core<Complex>(pi, 0, 0, ginv.mat());
}

/// Mean-value holomorphy probe: K-point circle mean against the center
/// value, plus the first anti-holomorphic Fourier moment of the circle
/// restriction (the plain mean is blind to anti-holomorphic parts, which
/// are harmonic). Holomorphic F drives both terms to quadrature noise.
inline double holomorphy_test(const std::function<Complex(Complex)>& f, Complex center,
                              double radius, int count) {
    if (count < 4) throw error("holomorphy test needs at least 4 circle points");
    if (std::abs(center.imag()) + radius > kCrownWindow)
        throw branch_violation_error("probe disk leaves the certified window");
    Complex mean(0.0), moment(0.0);
    for (int j = 0; j < count; ++j) {
        double phi = kTwoPi * double(j) / double(count);
        Complex w(std::cos(phi), std::sin(phi));
        Complex v = f(center + radius * w);
        mean += v;
        moment += v * w; // picks out the e^{-i phi} (z-bar) component
    }
    mean /= double(count);
    moment /= double(count);
    Complex fc = f(center);
    return (std::abs(mean - fc) + std::abs(moment)) / std::max(1.0, std::abs(fc));
}

/// Derivative word applied to the complexified spherical function by jets
/// in complexified directions.
inline Complex derivative_word_continuation(SpectralParameter s, const EnvelopingWord& w,
                                            const ComplexCartanPoint& p, int grid = 2048) {
    SphericalOnG psi{Realization(s, Parity::even, grid)};
    return lie_derivative_word(w, psi, p.element());
}

} // namespace hcme

#endif
