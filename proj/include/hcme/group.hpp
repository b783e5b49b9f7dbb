#ifndef HCME_GROUP_HPP
#define HCME_GROUP_HPP

// SL(2,R) / SL(2,C) group arithmetic, the H/E/F Lie-algebra basis,
// KAK (Cartan) coordinates, and jet lifts g -> exp(e1 X1)...g...exp(dm Ym)
// that carry higher left/right derivatives through any evaluator.

#include <cmath>
#include <vector>

#include "hcme/jet.hpp"
#include "hcme/scalar.hpp"

namespace hcme {

struct GroupElement {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};
    int chain = 0; // compositions since the determinant was last re-checked

    Complex det() const { return a * d - b * c; }

    /// inverse by the adjugate (det == 1)
    GroupElement inverse() const { return {d, -b, -c, a, chain}; }

    bool is_real(double tol = 1e-13) const {
        return std::abs(a.imag()) <= tol && std::abs(b.imag()) <= tol &&
               std::abs(c.imag()) <= tol && std::abs(d.imag()) <= tol;
    }

    Mat2<Complex> mat() const { return {a, b, c, d}; }

    double frobenius_norm() const {
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }

    static GroupElement identity() { return {}; }

    /// k(theta) = [[cos, -sin], [sin, cos]]
    static GroupElement rotation(double theta) {
        double cs = std::cos(theta), sn = std::sin(theta);
        return {Complex(cs), Complex(-sn), Complex(sn), Complex(cs)};
    }

    /// a(t) = diag(e^{t/2}, e^{-t/2}); complex t allowed
    static GroupElement hyperbolic(Complex t) {
        return {std::exp(t * 0.5), Complex(0.0), Complex(0.0), std::exp(-t * 0.5)};
    }
};

inline void check_determinant(const GroupElement& g) {
    double scale = std::max(1.0, std::abs(g.a * g.d) + std::abs(g.b * g.c));
    if (std::abs(g.det() - Complex(1.0)) > 1e-12 * scale)
        throw internal_check_error("group element determinant drifted from 1");
}

inline GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
    GroupElement r{g1.a * g2.a + g1.b * g2.c, g1.a * g2.b + g1.b * g2.d,
                   g1.c * g2.a + g1.d * g2.c, g1.c * g2.b + g1.d * g2.d,
                   std::max(g1.chain, g2.chain) + 1};
    if (r.chain > 100) {
        check_determinant(r);
        r.chain = 0;
    }
    return r;
}

/// Element x_H*H + x_E*E + x_F*F over H=[[1,0],[0,-1]], E=[[0,1],[0,0]],
/// F=[[0,0],[1,0]]. Complex coefficients give the complexified algebra.
struct LieAlgebraElement {
    Complex h{0.0}, e{0.0}, f{0.0};

    Mat2<Complex> mat() const { return {h, e, f, -h}; }

    LieAlgebraElement operator+(const LieAlgebraElement& o) const {
        return {h + o.h, e + o.e, f + o.f};
    }
    LieAlgebraElement operator-(const LieAlgebraElement& o) const {
        return {h - o.h, e - o.e, f - o.f};
    }
    LieAlgebraElement operator*(Complex s) const { return {h * s, e * s, f * s}; }

    static LieAlgebraElement H() { return {1.0, 0.0, 0.0}; }
    static LieAlgebraElement E() { return {0.0, 1.0, 0.0}; }
    static LieAlgebraElement F() { return {0.0, 0.0, 1.0}; }
    /// raising ladder H + i(E+F): shifts the K-type by +2
    static LieAlgebraElement raise() { return {1.0, Complex(0, 1), Complex(0, 1)}; }
    /// lowering ladder H - i(E+F): shifts the K-type by -2
    static LieAlgebraElement lower() { return {1.0, Complex(0, -1), Complex(0, -1)}; }
};

inline LieAlgebraElement bracket(const LieAlgebraElement& x, const LieAlgebraElement& y) {
    Mat2<Complex> m = x.mat() * y.mat();
    Mat2<Complex> n = y.mat() * x.mat();
    return {m.a - n.a, m.b - n.b, m.c - n.c};
}

/// Closed-form exp(tau*X) for traceless 2x2 X: with D = det of the scaled
/// matrix, exp(M) = cosh(w) I + sinh(w)/w M where w^2 = -D. Entire in D.
inline GroupElement exp_algebra(const LieAlgebraElement& x, Complex tau) {
    Mat2<Complex> m{x.h * tau, x.e * tau, x.f * tau, -x.h * tau};
    Complex d2 = m.a * m.a + m.b * m.c; // M^2 = d2 * I
    Complex w = std::sqrt(d2);
    Complex ch, shw; // cosh(w), sinh(w)/w
    if (std::abs(w) < 1e-4) {
        // series in d2; |d2| < 1e-8 so two terms reach full precision
        ch = Complex(1.0) + d2 / 2.0 + d2 * d2 / 24.0;
        shw = Complex(1.0) + d2 / 6.0 + d2 * d2 / 120.0;
    } else {
        ch = std::cosh(w);
        shw = std::sinh(w) / w;
    }
    return {ch + shw * m.a, shw * m.b, shw * m.c, ch - shw * m.a};
}

/// KAK coordinates: g = k(theta1) a(t) k(theta2), t >= 0.
/// theta1 in [0, pi); at t < 1e-10 it is pinned to 0. Angles in [0, 2pi).
struct CartanCoordinates {
    double theta1 = 0.0;
    double t = 0.0;
    double theta2 = 0.0;

    GroupElement reconstruct() const {
        return compose(GroupElement::rotation(theta1),
                       compose(GroupElement::hyperbolic(t), GroupElement::rotation(theta2)));
    }
};

inline double wrap_angle(double x) {
    x = std::fmod(x, kTwoPi);
    if (x < 0) x += kTwoPi;
    return x;
}

inline CartanCoordinates cartan_decompose(const GroupElement& g) {
    if (!g.is_real(1e-12)) throw error("cartan_decompose requires real entries");
    double a = g.a.real(), b = g.b.real(), c = g.c.real(), d = g.d.real();
    // g g^T = k(theta1) a(t)^2 k(theta1)^T; eigen-split the symmetric matrix
    double p = a * a + b * b, q = a * c + b * d, r = c * c + d * d;
    double t = std::acosh(std::max(1.0, (p + r) / 2.0)); // e^t + e^-t = trace
    CartanCoordinates cc;
    cc.t = t;
    if (t < 1e-10) {
        cc.theta1 = 0.0;
        cc.theta2 = wrap_angle(std::atan2(c, a));
        cc.t = 0.0;
        return cc;
    }
    double th = 0.5 * std::atan2(2.0 * q, p - r);
    // ensure the larger singular value sits in the (1,1) slot
    double cs = std::cos(th), sn = std::sin(th);
    double top = cs * (p * cs + q * sn) + sn * (q * cs + r * sn);
    if (top < (p + r) / 2.0) th += kPi / 2.0;
    th = wrap_angle(th);
    if (th >= kPi) th -= kPi; // theta1 ~ theta1 + pi (compensated below)
    cc.theta1 = th;
    GroupElement k2 = compose(GroupElement::hyperbolic(-t),
                              compose(GroupElement::rotation(-th), g));
    cc.theta2 = wrap_angle(std::atan2(k2.c.real(), k2.a.real()));
    return cc;
}

using JetMat = Mat2<Jet>;

enum class Side { left, right };

struct LiftDirection {
    Side side;
    LieAlgebraElement x;
};

/// exp(eps_i * X) as a 2x2 jet matrix, expanded to the shape's order
/// (multilinear shapes keep only I + eps X).
inline JetMat exp_jet(const JetShape& shape, int var, const LieAlgebraElement& x) {
    Jet eps = Jet::variable(shape, var, Complex(0.0));
    JetMat acc{Jet(shape, 1.0), Jet(shape, 0.0), Jet(shape, 0.0), Jet(shape, 1.0)};
    Mat2<Complex> pw{1.0, 0.0, 0.0, 1.0};
    Mat2<Complex> xm = x.mat();
    Jet epow(shape, 1.0);
    double fact = 1.0;
    int top = shape.multilinear ? 1 : shape.order;
    for (int p = 1; p <= top; ++p) {
        pw = pw * xm;
        epow *= eps;
        fact *= p;
        Complex inv(1.0 / fact);
        acc.a += epow * (pw.a * inv);
        acc.b += epow * (pw.b * inv);
        acc.c += epow * (pw.c * inv);
        acc.d += epow * (pw.d * inv);
    }
    return acc;
}

inline JetMat embed(const JetShape& shape, const Mat2<Complex>& g) {
    return {Jet(shape, g.a), Jet(shape, g.b), Jet(shape, g.c), Jet(shape, g.d)};
}

/// The jet matrix exp(e_k X_k)...g...exp(d_m Y_m): one formal variable per
/// direction, left-side directions composing on the left in list order,
/// right-side on the right. order == 0 picks max(2, #directions).
inline JetMat jet_lift(const GroupElement& g, const std::vector<LiftDirection>& dirs,
                       bool multilinear = false, int order = 0) {
    int d = int(dirs.size());
    if (d > 8) throw budget_error("jet budget exceeded: more than 8 directions");
    if (order == 0) order = std::max(2, d);
    const JetShape& shape = JetShape::get(d, order, multilinear);
    JetMat m = embed(shape, g.mat());
    for (int i = d - 1; i >= 0; --i)
        if (dirs[i].side == Side::left) m = exp_jet(shape, i, dirs[i].x) * m;
    for (int i = 0; i < d; ++i)
        if (dirs[i].side == Side::right) m = m * exp_jet(shape, i, dirs[i].x);
    return m;
}

} // namespace hcme

#endif
