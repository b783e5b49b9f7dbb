#ifndef HCME_PRINCIPAL_SERIES_HPP
#define HCME_PRINCIPAL_SERIES_HPP

// Principal series of SL(2,R) on the circle. Functions live on the double
// cover of the projective line: the parity constraint f(theta+pi) =
// (-1)^eps f(theta) encodes the character of M = {+-I}. The group acts by
//
//   (rho(g) f)(theta) = f(theta'') * j^{1/2 + s},
//
// where (theta'', j) is the circle action of g^{-1}. All evaluations go
// through one analytic integrand in u = g^{-1} omega(theta):
// e^{i theta''} = (u1 + i u2)/r and j = 1/r^2 with r^2 = u1^2 + u2^2,
// so the same code runs on jets and on complexified group elements.

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hcme/fft.hpp"
#include "hcme/group.hpp"
#include "hcme/jet.hpp"
#include "hcme/scalar.hpp"

namespace hcme {

enum class Parity { even, odd };

inline int parity_bit(Parity p) { return p == Parity::even ? 0 : 1; }

inline bool mode_matches(Parity p, int n) {
    return ((n % 2) + 2) % 2 == parity_bit(p);
}

/// Finite Fourier-coefficient vector with the parity constraint on its
/// support.
class KTypeVector {
  public:
    explicit KTypeVector(Parity p) : parity_(p) {}

    static KTypeVector basis(Parity p, int n) {
        KTypeVector v(p);
        v.set(n, Complex(1.0));
        return v;
    }

    Parity parity() const { return parity_; }

    void set(int n, Complex value) {
        if (!mode_matches(parity_, n))
            throw parity_error("K-type index has the wrong parity");
        if (value == Complex(0.0))
            c_.erase(n);
        else
            c_[n] = value;
    }

    void add(int n, Complex value) { set(n, get(n) + value); }

    Complex get(int n) const {
        auto it = c_.find(n);
        return it == c_.end() ? Complex(0.0) : it->second;
    }

    const std::map<int, Complex>& coefficients() const { return c_; }

    double norm() const {
        double s = 0.0;
        for (auto& [n, v] : c_) s += std::norm(v);
        return std::sqrt(s);
    }

    int max_abs_mode() const {
        int m = 0;
        for (auto& [n, v] : c_) m = std::max(m, std::abs(n));
        return m;
    }

    KTypeVector& operator+=(const KTypeVector& o) {
        for (auto& [n, v] : o.c_) add(n, v);
        return *this;
    }
    KTypeVector& operator-=(const KTypeVector& o) {
        for (auto& [n, v] : o.c_) add(n, -v);
        return *this;
    }
    KTypeVector& operator*=(Complex s) {
        for (auto& [n, v] : c_) v *= s;
        return *this;
    }

  private:
    Parity parity_;
    std::map<int, Complex> c_;
};

/// Compact-picture realization: spectral parameter, parity sector and the
/// equispaced grid carrying all quadratures. Immutable.
struct Realization {
    SpectralParameter s;
    Parity parity;
    int grid;

    Realization(SpectralParameter s_, Parity parity_, int grid_ = 256)
        : s(s_), parity(parity_), grid(grid_) {
        if (grid < 256 || grid > 16384 || !is_power_of_two(std::size_t(grid)))
            throw std::invalid_argument("grid size must be a power of two in [256, 16384]");
    }

    /// exponent of the jacobian cocycle, fixed so that Psi_s = Psi_{-s}
    /// and Psi_s(a_t) = P_{s-1/2}(cosh t)
    Complex cocycle_exponent() const { return Complex(0.5) + s; }

    double theta(int k) const { return kTwoPi * double(k) / double(grid); }

    Realization dual() const { return Realization(-s, parity, grid); }
};

using ModeList = std::vector<std::pair<int, Complex>>;

inline ModeList modes_of(const KTypeVector& v) {
    ModeList m;
    for (auto& [n, c] : v.coefficients()) m.emplace_back(n, c);
    return m;
}

/// (rho(g) f)(theta) for f = sum_n v_n e_n, evaluated from ginv = g^{-1}
/// (as a matrix over S; S is Complex or a jet type).
template <class S>
S act_value(const Realization& pi, const ModeList& modes, const Mat2<S>& ginv, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const Complex i(0.0, 1.0);
    S u1 = ginv.a * Complex(ct) + ginv.b * Complex(st);
    S u2 = ginv.c * Complex(ct) + ginv.d * Complex(st);
    S p = u1 + u2 * i;
    S q = u1 - u2 * i;
    S r2 = p * q;
    bool warped = false; // any mode above the spherical one
    for (auto& [n, v] : modes) warped = warped || (n != 0);
    if (!warped) {
        S f = r2 * Complex(0.0);
        for (auto& [n, v] : modes) f += v;
        return f * pow_analytic(r2, -pi.cocycle_exponent());
    }
    S rinv = pow_analytic(r2, Complex(-0.5));
    S zp = p * rinv; // e^{+i theta''}, analytically continued
    S zq = q * rinv; // e^{-i theta''}
    S one = r2 * Complex(0.0) + Complex(1.0);
    S f = r2 * Complex(0.0);
    // Fourier sum at the warped angle by integer powers, ascending |n|
    S pw = one;
    int cur = 0;
    for (auto it = modes.begin(); it != modes.end(); ++it) {
        if (it->first < 0) continue;
        while (cur < it->first) {
            pw = pw * zp;
            ++cur;
        }
        f += pw * it->second;
    }
    pw = one;
    cur = 0;
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
        if (it->first >= 0) continue;
        while (cur < -it->first) {
            pw = pw * zq;
            ++cur;
        }
        f += pw * it->second;
    }
    return f * pow_analytic(r2, -pi.cocycle_exponent());
}

/// Action of g on the circle: theta' is the angle of g.omega(theta) and
/// the jacobian d theta'/d theta equals |g.omega(theta)|^{-2}.
inline std::pair<double, double> circle_action(const GroupElement& g, double theta) {
    if (!g.is_real(1e-12)) throw error("circle_action requires real entries");
    double ct = std::cos(theta), st = std::sin(theta);
    double u1 = g.a.real() * ct + g.b.real() * st;
    double u2 = g.c.real() * ct + g.d.real() * st;
    double n2 = u1 * u1 + u2 * u2;
    return {wrap_angle(std::atan2(u2, u1)), 1.0 / n2};
}

namespace detail {

/// DFT the samples, reject parity violations and out-of-band energy,
/// return the surviving mode list.
inline ModeList analyze_samples(const Realization& pi, std::span<const Complex> f) {
    if (int(f.size()) != pi.grid) throw error("sample count does not match the grid");
    std::vector<Complex> buf(f.begin(), f.end());
    std::vector<Complex> coeff = fourier_coefficients(std::move(buf));
    const int half = pi.grid / 2;
    double norm = 0.0;
    for (auto& c : coeff) norm += std::norm(c);
    norm = std::sqrt(norm);
    double parity_mass = 0.0, band_mass = 0.0;
    ModeList modes;
    for (int k = 0; k < pi.grid; ++k) {
        int m = k - half;
        Complex c = coeff[std::size_t(k)];
        if (c == Complex(0.0)) continue;
        if (!mode_matches(pi.parity, m)) {
            parity_mass += std::norm(c);
            continue;
        }
        if (std::abs(m) > pi.grid / 4) {
            band_mass += std::norm(c);
            continue;
        }
        if (std::abs(c) > 1e-16 * std::max(1.0, norm)) modes.emplace_back(m, c);
    }
    const double tol = 1e-10 * std::max(1.0, norm);
    if (std::sqrt(parity_mass) > tol)
        throw parity_error("grid samples violate the parity constraint");
    if (std::sqrt(band_mass) > tol)
        throw bandwidth_error("input occupies Fourier modes above grid/4");
    return modes;
}

} // namespace detail

/// rho(g) applied to grid samples; off-grid values come from the
/// trigonometric interpolant, exact on band-limited input.
inline std::vector<Complex> act(const Realization& pi, const GroupElement& g,
                                std::span<const Complex> samples) {
    if (!g.is_real(1e-12)) throw error("act requires real group elements");
    ModeList modes = detail::analyze_samples(pi, samples);
    Mat2<Complex> ginv = g.inverse().mat();
    std::vector<Complex> out(std::size_t(pi.grid));
    for (int k = 0; k < pi.grid; ++k)
        out[std::size_t(k)] = act_value<Complex>(pi, modes, ginv, pi.theta(k));
    return out;
}

/// (1/2pi) integral of (rho(g) e_n)(theta) e^{-im theta} by the trapezoid
/// rule on the realization grid; S generic so jets flow through.
template <class S>
S matrix_element_core(const Realization& pi, int m, int n, const Mat2<S>& ginv) {
    ModeList modes{{n, Complex(1.0)}};
    S acc = act_value<S>(pi, modes, ginv, pi.theta(0)); // e^{-im*0} = 1
    for (int k = 1; k < pi.grid; ++k) {
        double th = pi.theta(k);
        acc += act_value<S>(pi, modes, ginv, th) *
               Complex(std::cos(m * th), -std::sin(m * th));
    }
    return acc * Complex(1.0 / double(pi.grid));
}

inline Complex matrix_element(const Realization& pi, int m, int n, const GroupElement& g) {
    if (!mode_matches(pi.parity, m) || !mode_matches(pi.parity, n))
        throw parity_error("matrix element indices must match the parity sector");
    return matrix_element_core<Complex>(pi, m, n, g.inverse().mat());
}

/// One evaluated matrix element with its arguments.
struct MatrixElementSample {
    GroupElement g;
    int m = 0, n = 0;
    Complex value;
};

inline MatrixElementSample sample_matrix_element(const Realization& pi, int m, int n,
                                                 const GroupElement& g) {
    return {g, m, n, matrix_element(pi, m, n, g)};
}

/// Psi_s(g): the bi-K-invariant matrix element, normalized to 1 at the
/// identity. Depends only on the Cartan parameter of g.
inline Complex spherical_function(SpectralParameter s, const GroupElement& g, int grid = 256) {
    return matrix_element(Realization(s, Parity::even, grid), 0, 0, g);
}

} // namespace hcme

#endif
