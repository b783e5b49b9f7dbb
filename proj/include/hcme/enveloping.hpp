#ifndef HCME_ENVELOPING_HPP
#define HCME_ENVELOPING_HPP

// Left/right Lie-derivative words on functions on G, the derived action
// on K-types, the measured ladder coefficients, and the expression of
// K-types as enveloping words applied to the spherical vector.
//
// Sign conventions: L_X F(g) = d/de F(exp(eX) g)|_0 and
// R_X F(g) = d/de F(g exp(eX))|_0. Ladder letters are X+ = H + i(E+F)
// (raises the K-type by 2) and X- = H - i(E+F) (lowers by 2); the
// coefficients are measured through the realization, never postulated.

#include <algorithm>
#include <concepts>
#include <string>
#include <vector>

#include "hcme/group.hpp"
#include "hcme/principal_series.hpp"

namespace hcme {

struct WordLetter {
    Side side;
    LieAlgebraElement x;
};

struct WordTerm {
    Complex coeff{1.0};
    std::vector<WordLetter> letters;
};

/// Formal linear combination of products of left/right-acting letters.
struct EnvelopingWord {
    std::vector<WordTerm> terms;

    int degree() const {
        std::size_t d = 0;
        for (auto& t : terms) d = std::max(d, t.letters.size());
        return int(d);
    }

    static EnvelopingWord empty() { return {{WordTerm{Complex(1.0), {}}}}; }

    static EnvelopingWord monomial(Complex coeff, std::vector<WordLetter> letters) {
        return {{WordTerm{coeff, std::move(letters)}}};
    }
};

/// Anything evaluable on a jet-valued 2x2 matrix. All functions in this
/// project are: they are quadratures of integrands analytic in the
/// entries.
template <class F>
concept GroupFunction = requires(const F& f, const Mat2<Complex>& m, const Mat2<Jet>& j) {
    { f(m) } -> std::convertible_to<Complex>;
    { f(j) } -> std::convertible_to<Jet>;
};

/// Psi_s as a function on G (and, through jets, on a neighborhood in the
/// complexification).
struct SphericalOnG {
    Realization pi; // even sector

    template <class S>
    S operator()(const Mat2<S>& g) const {
        return matrix_element_core<S>(pi, 0, 0, inverse2(g));
    }
};

/// Applies a word of left/right Lie derivatives to F at g: each term is
/// the all-ones mixed jet coefficient of F(jet_lift(g, letters)).
template <GroupFunction F>
Complex lie_derivative_word(const EnvelopingWord& w, const F& fn, const GroupElement& g) {
    Complex acc(0.0);
    for (const auto& term : w.terms) {
        if (term.letters.size() > 8)
            throw budget_error("derivative word exceeds the jet budget");
        if (term.letters.empty()) {
            acc += term.coeff * fn(g.mat());
            continue;
        }
        std::vector<LiftDirection> dirs;
        dirs.reserve(term.letters.size());
        for (auto& l : term.letters) dirs.push_back({l.side, l.x});
        JetMat lifted = jet_lift(g, dirs, /*multilinear=*/true);
        Jet value = fn(lifted);
        acc += term.coeff * value.mixed_all();
    }
    return acc;
}

/// dpi(X) v = d/de rho(exp(eX)) v |_0, returned in the Fourier basis.
/// The result is supported within support(v) shifted by at most 2.
inline KTypeVector derived_action(const Realization& pi, const LieAlgebraElement& x,
                                  const KTypeVector& v) {
    if (v.parity() != pi.parity) throw parity_error("vector parity does not match realization");
    if (v.coefficients().empty()) return KTypeVector(pi.parity);
    int lo = v.coefficients().begin()->first;
    int hi = v.coefficients().rbegin()->first;
    if (std::max(std::abs(lo), std::abs(hi)) + 2 > pi.grid / 4)
        throw bandwidth_error("derived action would exceed the grid bandwidth");
    ModeList modes = modes_of(v);
    const JetShape& shape = JetShape::get(1, 1, true);
    JetMat ginv = exp_jet(shape, 0, x * Complex(-1.0)); // (exp(eX))^{-1}
    std::vector<Complex> deriv(std::size_t(pi.grid));
    for (int k = 0; k < pi.grid; ++k)
        deriv[std::size_t(k)] = act_value<Jet>(pi, modes, ginv, pi.theta(k)).first_order(0);
    KTypeVector out(pi.parity);
    for (int m = lo - 2; m <= hi + 2; m += 2) {
        Complex acc(0.0);
        for (int k = 0; k < pi.grid; ++k) {
            double th = pi.theta(k);
            acc += deriv[std::size_t(k)] * Complex(std::cos(m * th), -std::sin(m * th));
        }
        out.set(m, acc / double(pi.grid));
    }
    return out;
}

/// Measured coefficient of e_{n+2*dir} in dpi(X_{dir}) e_n; dir is +1
/// (raise) or -1 (lower). Off-target components above 1e-9 indicate a
/// convention bug and are rejected.
inline Complex ladder_coefficient(const Realization& pi, int n, int dir) {
    LieAlgebraElement x = dir > 0 ? LieAlgebraElement::raise() : LieAlgebraElement::lower();
    KTypeVector image = derived_action(pi, x, KTypeVector::basis(pi.parity, n));
    Complex c = image.get(n + 2 * dir);
    KTypeVector rest = image;
    rest.add(n + 2 * dir, -c);
    if (rest.norm() > 1e-9)
        throw internal_check_error("off-target ladder residual at n=" + std::to_string(n));
    return c;
}

/// Table n -> (c_n^+, c_n^-) for |n| <= n_max in the realization's parity.
struct LadderCoefficients {
    int n_max = 0;
    std::vector<std::pair<int, std::pair<Complex, Complex>>> table;

    std::pair<Complex, Complex> at(int n) const {
        for (auto& e : table)
            if (e.first == n) return e.second;
        throw error("ladder table has no entry for n=" + std::to_string(n));
    }
};

inline LadderCoefficients ladder_coefficients(const Realization& pi, int n_max) {
    if (n_max > pi.grid / 8) throw error("ladder table n_max exceeds grid/8");
    LadderCoefficients lc;
    lc.n_max = n_max;
    for (int n = -n_max; n <= n_max; ++n) {
        if (!mode_matches(pi.parity, n)) continue;
        lc.table.push_back({n, {ladder_coefficient(pi, n, +1), ladder_coefficient(pi, n, -1)}});
    }
    return lc;
}

constexpr double kExceptionalThreshold = 1e-8;

struct KTypeExpression {
    EnvelopingWord word; // right-acting ladder letters, outermost first
    Complex scale;
};

/// Expresses e_n (even sector) as scale * (word applied to e_0). Raises
/// exceptional_parameter_error when a ladder coefficient on the path has
/// modulus below 1e-8: the computational face of "general position".
inline KTypeExpression express_ktype(const Realization& pi, int n) {
    if (pi.parity != Parity::even)
        throw parity_error("only the even sector has a spherical vector");
    if (!mode_matches(Parity::even, n)) throw parity_error("K-type index must be even");
    std::vector<WordLetter> letters;
    Complex scale(1.0);
    int dir = n > 0 ? +1 : -1;
    LieAlgebraElement x = dir > 0 ? LieAlgebraElement::raise() : LieAlgebraElement::lower();
    for (int k = 0; k != n; k += 2 * dir) {
        Complex c = ladder_coefficient(pi, k, dir);
        if (std::abs(c) < kExceptionalThreshold)
            throw exceptional_parameter_error(
                "ladder coefficient vanishes at rung n=" + std::to_string(k) +
                " (s=" + format_complex(pi.s) + ")");
        scale *= Complex(1.0) / c;
        letters.insert(letters.begin(), WordLetter{Side::right, x});
    }
    return {EnvelopingWord::monomial(Complex(1.0), letters), scale};
}

/// One zero of a ladder coefficient on the real s axis.
struct ExceptionalZero {
    int n;      // rung
    int dir;    // +1 or -1
    double s0;  // located zero
    double witness; // |c| at s0
};

/// Scans c_n^{+-}(s) for real s in [s_lo, s_hi] on a uniform grid and
/// refines each sign change of Re c by bisection. For real s the measured
/// coefficients are real up to quadrature rounding; that is asserted, not
/// assumed.
inline std::vector<ExceptionalZero> exceptional_scan(Parity parity, int n_max, double s_lo,
                                                     double s_hi, double step = 0.02,
                                                     int grid = 256) {
    std::vector<ExceptionalZero> zeros;
    auto measure = [&](int n, int dir, double s) {
        Realization pi(Complex(s, 0.0), parity, grid);
        Complex c = ladder_coefficient(pi, n, dir);
        if (std::abs(c.imag()) > 1e-8 * std::max(1.0, std::abs(c)))
            throw internal_check_error("ladder coefficient not real on the real s axis");
        return c.real();
    };
    for (int n = -n_max; n <= n_max; ++n) {
        if (!mode_matches(parity, n)) continue;
        for (int dir : {+1, -1}) {
            double prev_s = s_lo;
            double prev_c = measure(n, dir, prev_s);
            for (double s = s_lo + step; s <= s_hi + 0.5 * step; s += step) {
                double cur_s = std::min(s, s_hi);
                double cur_c = measure(n, dir, cur_s);
                if ((prev_c < 0.0) != (cur_c < 0.0)) {
                    double a = prev_s, b = cur_s, fa = prev_c;
                    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
                        double mid = 0.5 * (a + b);
                        double fm = measure(n, dir, mid);
                        if ((fm < 0.0) == (fa < 0.0)) {
                            a = mid;
                            fa = fm;
                        } else {
                            b = mid;
                        }
                    }
                    double s0 = 0.5 * (a + b);
                    zeros.push_back({n, dir, s0, std::abs(measure(n, dir, s0))});
                }
                prev_s = cur_s;
                prev_c = cur_c;
            }
        }
    }
    return zeros;
}

/// Distinct zero locations from a scan, merged within the given spacing.
inline std::vector<double> distinct_zero_locations(const std::vector<ExceptionalZero>& zeros,
                                                   double spacing = 1e-6) {
    std::vector<double> out;
    for (auto& z : zeros) out.push_back(z.s0);
    std::sort(out.begin(), out.end());
    std::vector<double> merged;
    for (double s : out)
        if (merged.empty() || s - merged.back() > spacing) merged.push_back(s);
    return merged;
}

} // namespace hcme

#endif
