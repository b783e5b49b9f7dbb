#ifndef HCME_DECOMPOSITION_HPP
#define HCME_DECOMPOSITION_HPP

// Verification layer for the decomposition of K-finite matrix elements:
//
//  - spherical sector: the matrix element equals a left/right derivative
//    word applied to Psi_s, checked as a two-path identity (quadrature
//    vs jet-differentiated quadrature);
//  - finite-dimensional matrix elements Sym^l;
//  - non-spherical sector: least-squares fit of the target onto the
//    dictionary { h_i(g) * (p q Psi_{s0+delta})(g) } with held-out
//    validation;
//  - exceptional parameters: circle-mean limits of the generic-s formula.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hcme/enveloping.hpp"
#include "hcme/parallel.hpp"
#include "hcme/sampling.hpp"

namespace hcme {

// ---------------------------------------------------------------------
// finite-dimensional representations Sym^l(standard)
// ---------------------------------------------------------------------

/// All (l+1)^2 matrix entries of Sym^l(g) in the monomial basis
/// x^{l-i} y^i, row-major: entry (i,j) is the coefficient of x^{l-i} y^i
/// in (a x + c y)^{l-j} (b x + d y)^j.
namespace detail {

inline Complex ipow(Complex z, int k) {
    Complex r(1.0);
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

} // namespace detail

inline std::vector<Complex> finite_dim_matrix_elements(int ell, const GroupElement& g) {
    if (ell < 0 || ell > 12) throw error("Sym^l degree out of range");
    const int dim = ell + 1;
    std::vector<Complex> m(std::size_t(dim) * dim, Complex(0.0));
    for (int j = 0; j < dim; ++j) {
        // (a x + c y)^{l-j} coefficients, then convolve with (b x + d y)^j
        std::vector<Complex> p1(std::size_t(ell - j) + 1), p2(std::size_t(j) + 1);
        double binom = 1.0;
        for (int k = 0; k <= ell - j; ++k) {
            p1[std::size_t(k)] =
                Complex(binom) * detail::ipow(g.a, ell - j - k) * detail::ipow(g.c, k);
            binom = binom * double(ell - j - k) / double(k + 1);
        }
        binom = 1.0;
        for (int k = 0; k <= j; ++k) {
            p2[std::size_t(k)] =
                Complex(binom) * detail::ipow(g.b, j - k) * detail::ipow(g.d, k);
            binom = binom * double(j - k) / double(k + 1);
        }
        for (int k1 = 0; k1 <= ell - j; ++k1)
            for (int k2 = 0; k2 <= j; ++k2)
                m[std::size_t(k1 + k2) * dim + j] += p1[std::size_t(k1)] * p2[std::size_t(k2)];
    }
    return m;
}

struct FiniteDimRep {
    int ell;
    Complex entry(int i, int j, const GroupElement& g) const {
        return finite_dim_matrix_elements(ell, g)[std::size_t(i) * (ell + 1) + j];
    }
};

// ---------------------------------------------------------------------
// spherical sector: the two-path identity
// ---------------------------------------------------------------------

/// The derivative-word side of the identity for the even-sector matrix
/// element (m, n): word letters and the overall scale, ready to evaluate
/// at any s where the ladder path exists.
struct TwoPathFormula {
    EnvelopingWord word;
    Complex scale; // product of inverse ladder coefficients and the sign
};

/// Builds the formula at parameter s: e_n = scale_n (right word) e_0 in
/// the realization, e_{-m} = scale_m (dual word) e_0 in the dual
/// realization; pairing moves dual letters to left derivatives with one
/// sign each. Throws exceptional_parameter_error off general position.
inline TwoPathFormula two_path_formula(SpectralParameter s, int m, int n, int grid = 256) {
    Realization pi(s, Parity::even, grid);
    KTypeExpression pn = express_ktype(pi, n);
    KTypeExpression qm = express_ktype(pi.dual(), -m);
    std::vector<WordLetter> letters;
    const auto& qletters = qm.word.terms.at(0).letters;
    // abstract dual letters act outermost-first; left lifts compose
    // contravariantly, so the list order flips
    for (auto it = qletters.rbegin(); it != qletters.rend(); ++it)
        letters.push_back({Side::left, it->x});
    for (const auto& l : pn.word.terms.at(0).letters) letters.push_back(l);
    Complex sign = (qletters.size() % 2 == 0) ? Complex(1.0) : Complex(-1.0);
    return {EnvelopingWord::monomial(Complex(1.0), letters), sign * pn.scale * qm.scale};
}

/// RHS value: scale * (word Psi_s)(g).
inline Complex two_path_rhs(const TwoPathFormula& f, Complex s, const GroupElement& g,
                            int grid = 256) {
    SphericalOnG psi{Realization(s, Parity::even, grid)};
    return f.scale * lie_derivative_word(f.word, psi, g);
}

struct TwoPathRow {
    GroupElement g;
    Complex lhs, rhs;
    double rel_err;
};

struct TwoPathReport {
    Complex s;
    int m, n;
    std::vector<TwoPathRow> rows;
    double max_rel_err = 0.0;
};

/// Checks quadrature LHS against derivative-word RHS on the samples.
/// Relative error is guarded by 1e-2 of the sample RMS so isolated zeros
/// of the matrix element do not divide by zero.
inline TwoPathReport verify_spherical_identity(SpectralParameter s, int m, int n,
                                               const std::vector<GroupElement>& samples,
                                               int grid = 256) {
    TwoPathReport rep{s, m, n, {}, 0.0};
    Realization pi(s, Parity::even, grid);
    TwoPathFormula f = two_path_formula(s, m, n, grid);
    double rms = 0.0;
    std::vector<Complex> lhs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        lhs[i] = matrix_element(pi, m, n, samples[i]);
        rms += std::norm(lhs[i]);
    }
    rms = std::sqrt(rms / std::max<std::size_t>(1, samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Complex r = two_path_rhs(f, s, samples[i], grid);
        double denom = std::max(std::abs(lhs[i]), 1e-2 * std::max(rms, 1e-30));
        double rel = std::abs(lhs[i] - r) / denom;
        rep.rows.push_back({samples[i], lhs[i], r, rel});
        rep.max_rel_err = std::max(rep.max_rel_err, rel);
    }
    return rep;
}

// ---------------------------------------------------------------------
// non-spherical sector: dictionary fit with held-out validation
// ---------------------------------------------------------------------

/// Pure ladder monomial per side, encoded by a signed power: code w >= 0
/// means X+^w (raising), w < 0 means X-^{|w|}.
struct DictionaryAtomKey {
    int h_index;     // Sym^l entry, row-major
    int p_code;      // right word
    int q_code;      // left word
    int shift_index; // index into the shift list
};

struct DictionarySpec {
    int ell = 1;
    int degree = 2; // word degree budget per side
    std::vector<Complex> shifts{Complex(0.5), Complex(-0.5)};
};

inline std::vector<DictionaryAtomKey> enumerate_atoms(const DictionarySpec& spec) {
    std::vector<DictionaryAtomKey> atoms;
    const int dim = (spec.ell + 1) * (spec.ell + 1);
    for (int si = 0; si < int(spec.shifts.size()); ++si)
        for (int q = -spec.degree; q <= spec.degree; ++q)
            for (int p = -spec.degree; p <= spec.degree; ++p)
                for (int h = 0; h < dim; ++h) atoms.push_back({h, p, q, si});
    return atoms;
}

inline std::string word_code_text(int code) {
    if (code == 0) return "1";
    std::string s = code > 0 ? "X+" : "X-";
    int k = std::abs(code);
    if (k > 1) s += "^" + std::to_string(k);
    return s;
}

namespace detail {

inline EnvelopingWord dictionary_word(int q_code, int p_code) {
    std::vector<WordLetter> letters;
    LieAlgebraElement xq =
        q_code >= 0 ? LieAlgebraElement::raise() : LieAlgebraElement::lower();
    LieAlgebraElement xp =
        p_code >= 0 ? LieAlgebraElement::raise() : LieAlgebraElement::lower();
    for (int k = 0; k < std::abs(q_code); ++k) letters.push_back({Side::left, xq});
    for (int k = 0; k < std::abs(p_code); ++k) letters.push_back({Side::right, xp});
    return EnvelopingWord::monomial(Complex(1.0), letters);
}

} // namespace detail

/// (q p Psi_{s0+delta})(g) for the coded pure-power words; the h factor
/// is applied by the matrix builder.
inline Complex dictionary_word_value(int q_code, int p_code, Complex s_shifted,
                                     const GroupElement& g, int grid = 256) {
    SphericalOnG psi{Realization(s_shifted, Parity::even, grid)};
    return lie_derivative_word(detail::dictionary_word(q_code, p_code), psi, g);
}

namespace detail {

/// Every (q, p) word value at once from four quadrant lifts: a degree-N
/// multilinear lift per sign pair carries the values of all its sub-words
/// as subset coefficients. Layout: vals[(q+N)*(2N+1) + (p+N)].
inline std::vector<Complex> all_word_values(int deg, Complex s_shifted, const GroupElement& g,
                                            int grid) {
    const int words = 2 * deg + 1;
    std::vector<Complex> vals(std::size_t(words) * words, Complex(0.0));
    Realization pi(s_shifted, Parity::even, grid);
    const ModeList spherical{{0, Complex(1.0)}};
    if (deg == 0) {
        vals[0] = matrix_element_core<Complex>(pi, 0, 0, inverse2(g.mat()));
        return vals;
    }
    for (int sq : {+1, -1})
        for (int sp : {+1, -1}) {
            LieAlgebraElement xq =
                sq > 0 ? LieAlgebraElement::raise() : LieAlgebraElement::lower();
            LieAlgebraElement xp =
                sp > 0 ? LieAlgebraElement::raise() : LieAlgebraElement::lower();
            std::vector<LiftDirection> dirs;
            for (int i = 0; i < deg; ++i) dirs.push_back({Side::left, xq});
            for (int i = 0; i < deg; ++i) dirs.push_back({Side::right, xp});
            JetMat lift = jet_lift(g, dirs, /*multilinear=*/true);
            Mat2<Jet> ginv = inverse2(lift);
            Jet acc = act_value<Jet>(pi, spherical, ginv, pi.theta(0));
            for (int k = 1; k < pi.grid; ++k)
                acc += act_value<Jet>(pi, spherical, ginv, pi.theta(k));
            acc *= Complex(1.0 / double(pi.grid));
            // subset coefficients; q = 0 and p = 0 slices belong to the
            // positive quadrant so each (q, p) is written exactly once
            std::vector<std::uint8_t> expo(std::size_t(2 * deg), 0);
            for (int kq = (sq > 0 ? 0 : 1); kq <= deg; ++kq) {
                for (int i = 0; i < deg; ++i) expo[std::size_t(i)] = i < kq ? 1 : 0;
                for (int kp = (sp > 0 ? 0 : 1); kp <= deg; ++kp) {
                    for (int i = 0; i < deg; ++i)
                        expo[std::size_t(deg + i)] = i < kp ? 1 : 0;
                    vals[std::size_t(sq * kq + deg) * words + std::size_t(sp * kp + deg)] =
                        acc.coeff(expo);
                }
            }
        }
    return vals;
}

} // namespace detail

/// Fitted coefficients with their residuals and the witnessing samples.
struct CertificateTerm {
    DictionaryAtomKey key;
    Complex coefficient;
};

struct DecompositionCertificate {
    SpectralParameter s0;
    Parity parity = Parity::odd;
    int m = 0, n = 0;
    DictionarySpec dictionary;
    int dictionary_columns = 0;
    int retained_rank = 0;
    std::vector<CertificateTerm> terms;
    double fit_residual = 0.0;
    double holdout_residual = 0.0;
    std::uint64_t seed = 0;
    int n_fit = 0, n_holdout = 0;
    std::vector<GroupElement> fit_samples, holdout_samples;

    int term_count() const { return int(terms.size()); }

    int max_word_degree() const {
        int d = 0;
        for (auto& t : terms)
            d = std::max(d, std::max(std::abs(t.key.p_code), std::abs(t.key.q_code)));
        return d;
    }
};

namespace detail {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Minimum-norm least squares on the given columns. The SVD threshold at
/// relative 1e-10 is the column-pruning rule: directions below it are
/// dropped, so coefficients stay bounded on rank-deficient supports
/// (a target representable at either spectral shift alone makes the
/// pooled support exactly rank-deficient).
inline CVec ls_solve(const CMat& a, const std::vector<int>& cols, const CVec& y) {
    CMat sub(a.rows(), Eigen::Index(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(Eigen::Index(k)) = a.col(cols[k]);
    Eigen::JacobiSVD<CMat> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    return svd.solve(y);
}

inline CVec residual_of(const CMat& a, const std::vector<int>& cols, const CVec& x,
                        const CVec& y) {
    CVec r = y;
    for (std::size_t k = 0; k < cols.size(); ++k) r -= a.col(cols[k]) * x(Eigen::Index(k));
    return r;
}

} // namespace detail

/// Core fit against arbitrary target values; fit_decomposition wraps it
/// with the principal-series target, tests may feed synthetic targets.
inline DecompositionCertificate
fit_core(const std::function<Complex(const GroupElement&)>& target, SpectralParameter s0, Parity parity,
         int m, int n, const DictionarySpec& spec, int n_fit, int n_holdout, std::uint64_t seed,
         int grid = 256, double tol_holdout = 1e-6, int max_terms = 40, int threads = 1) {
    if ((spec.ell % 2) != parity_bit(parity))
        throw rank_deficient_error("dictionary has no atoms of the target parity: Sym^l "
                                   "restricted to M must contain the target character");
    if (spec.degree < 0 || spec.degree > 4) throw error("dictionary word degree out of range");
    if (n_fit < 4 || n_holdout < 2) throw error("too few fit or holdout samples");

    Rng rng(seed);
    Rng rng_fit = rng.fork(1), rng_hold = rng.fork(2);
    std::vector<GroupElement> gs_fit = sample_group_list(rng_fit, n_fit);
    std::vector<GroupElement> gs_hold = sample_group_list(rng_hold, n_holdout);

    std::vector<DictionaryAtomKey> atoms = enumerate_atoms(spec);
    const int n_atoms = int(atoms.size());
    const int dim = spec.ell + 1;

    auto build = [&](const std::vector<GroupElement>& gs, detail::CMat& a, detail::CVec& y) {
        a.resize(Eigen::Index(gs.size()), n_atoms);
        y.resize(Eigen::Index(gs.size()));
        parallel_for(int(gs.size()), threads, [&](int row) {
            const GroupElement& g = gs[std::size_t(row)];
            std::vector<Complex> h = finite_dim_matrix_elements(spec.ell, g);
            const int words = 2 * spec.degree + 1;
            // word values are shared across the h factors and extracted
            // together from the quadrant lifts
            for (int si = 0; si < int(spec.shifts.size()); ++si) {
                std::vector<Complex> w = detail::all_word_values(
                    spec.degree, s0 + spec.shifts[std::size_t(si)], g, grid);
                for (int q = -spec.degree; q <= spec.degree; ++q)
                    for (int p = -spec.degree; p <= spec.degree; ++p) {
                        Complex wv =
                            w[std::size_t(q + spec.degree) * words + std::size_t(p + spec.degree)];
                        for (int hi = 0; hi < dim * dim; ++hi) {
                            // column order matches enumerate_atoms: (si, q, p, h)
                            int col = ((si * words + (q + spec.degree)) * words +
                                       (p + spec.degree)) *
                                          dim * dim +
                                      hi;
                            a(row, col) = h[std::size_t(hi)] * wv;
                        }
                    }
            }
            y(row) = target(g);
        });
    };

    detail::CMat a_fit, a_hold;
    detail::CVec y_fit, y_hold;
    build(gs_fit, a_fit, y_fit);
    build(gs_hold, a_hold, y_hold);

    const double y_norm = y_fit.norm();
    if (y_norm == 0.0) throw error("target vanishes on every fit sample");

    // rank-revealing factorization: reports the numerical rank at the
    // 1e-10 relative pivot and rejects an all-zero dictionary
    Eigen::ColPivHouseholderQR<detail::CMat> qr(a_fit);
    const auto& rdiag = qr.matrixQR().diagonal();
    double pivot0 = std::abs(rdiag(0));
    if (pivot0 == 0.0) throw rank_deficient_error("dictionary columns are all zero");
    int rank = 0;
    Eigen::Index rmax = std::min<Eigen::Index>(a_fit.rows(), a_fit.cols());
    while (rank < rmax && std::abs(rdiag(rank)) >= 1e-10 * pivot0) ++rank;

    // Word-block matching pursuit. A word term of the decomposition
    // enters with its whole row of Sym^l entries, and the same word can
    // contribute at either spectral shift, so the selection unit is the
    // (q, p) word with all shifts and all h entries pooled. Per-column
    // greedy stalls on this coherent dictionary; word blocks do not.
    std::vector<double> colnorm(std::size_t(n_atoms), 0.0);
    double max_colnorm = 0.0;
    for (int j = 0; j < n_atoms; ++j) {
        colnorm[std::size_t(j)] = a_fit.col(j).norm();
        max_colnorm = std::max(max_colnorm, colnorm[std::size_t(j)]);
    }
    if (max_colnorm == 0.0) throw rank_deficient_error("no dictionary columns survive pruning");
    const int words = 2 * spec.degree + 1;
    const int n_shifts = int(spec.shifts.size());
    auto word_block = [&](int block) {
        int qi = block / words, pi = block % words;
        std::vector<int> cols;
        for (int si = 0; si < n_shifts; ++si)
            for (int hi = 0; hi < dim * dim; ++hi) {
                int j = ((si * words + qi) * words + pi) * dim * dim + hi;
                if (colnorm[std::size_t(j)] > 1e-12 * max_colnorm) cols.push_back(j);
            }
        return cols;
    };
    const int n_blocks = words * words;
    const int block_cols = n_shifts * dim * dim;
    const int max_blocks = std::max(1, max_terms / block_cols);
    std::vector<bool> block_used(std::size_t(n_blocks), false);
    std::vector<int> support;
    detail::CVec x, resid = y_fit;
    const double stop = std::max(1e-9, 1e-2 * tol_holdout) * y_norm;
    double prev = resid.norm();
    for (int step = 0; step < max_blocks && resid.norm() > stop; ++step) {
        int best = -1;
        double best_gain = 0.0;
        for (int bl = 0; bl < n_blocks; ++bl) {
            if (block_used[std::size_t(bl)]) continue;
            std::vector<int> cols = word_block(bl);
            if (cols.empty()) continue;
            detail::CVec xb = detail::ls_solve(a_fit, cols, resid);
            double after = detail::residual_of(a_fit, cols, xb, resid).norm();
            double gain = resid.squaredNorm() - after * after;
            if (gain > best_gain) {
                best_gain = gain;
                best = bl;
            }
        }
        if (best < 0) break;
        block_used[std::size_t(best)] = true;
        for (int j : word_block(best)) support.push_back(j);
        x = detail::ls_solve(a_fit, support, y_fit);
        resid = detail::residual_of(a_fit, support, x, y_fit);
        double cur = resid.norm();
        if (cur > 0.99 * prev && cur > stop) break; // stalled
        prev = cur;
    }
    if (support.empty()) throw rank_deficient_error("matching pursuit selected no columns");

    // drop negligible atoms and refit
    std::vector<int> kept;
    for (std::size_t k = 0; k < support.size(); ++k)
        if (std::abs(x(Eigen::Index(k))) * colnorm[std::size_t(support[k])] > 1e-8 * y_norm)
            kept.push_back(support[k]);
    if (kept.empty()) kept = support;
    std::sort(kept.begin(), kept.end());
    x = detail::ls_solve(a_fit, kept, y_fit);
    resid = detail::residual_of(a_fit, kept, x, y_fit);

    DecompositionCertificate cert;
    cert.s0 = s0;
    cert.parity = parity;
    cert.m = m;
    cert.n = n;
    cert.dictionary = spec;
    cert.dictionary_columns = n_atoms;
    cert.retained_rank = rank;
    cert.seed = seed;
    cert.n_fit = n_fit;
    cert.n_holdout = n_holdout;
    cert.fit_samples = gs_fit;
    cert.holdout_samples = gs_hold;
    for (std::size_t k = 0; k < kept.size(); ++k)
        cert.terms.push_back({atoms[std::size_t(kept[k])], x(Eigen::Index(k))});
    cert.fit_residual = resid.norm() / y_norm;

    detail::CVec rh = detail::residual_of(a_hold, kept, x, y_hold);
    double yh = y_hold.norm();
    cert.holdout_residual = yh > 0.0 ? rh.norm() / yh : rh.norm();

    if (cert.fit_residual < tol_holdout && cert.holdout_residual > tol_holdout &&
        cert.holdout_residual > 100.0 * std::max(cert.fit_residual, 1e-14))
        throw overfit_error("fit residual is small but the held-out residual is not: "
                            "enlarge the sample sets, not the dictionary");
    return cert;
}

/// Fits the matrix element (m, n) of the target-parity series at s0 onto
/// the dictionary over Sym^l entries, pure ladder words of degree <= N,
/// and the listed spectral shifts.
inline DecompositionCertificate
fit_decomposition(SpectralParameter s0, Parity parity, int m, int n, const DictionarySpec& spec, int n_fit,
                  int n_holdout, std::uint64_t seed, int grid = 256, double tol_holdout = 1e-6,
                  int max_terms = 40, int threads = 1) {
    if (!mode_matches(parity, m) || !mode_matches(parity, n))
        throw parity_error("target indices must match the target parity");
    Realization pi(s0, parity, grid);
    auto target = [&pi, m, n](const GroupElement& g) { return matrix_element(pi, m, n, g); };
    return fit_core(target, s0, parity, m, n, spec, n_fit, n_holdout, seed, grid, tol_holdout,
                    max_terms, threads);
}

// ---------------------------------------------------------------------
// exceptional parameters: circle-mean limits
// ---------------------------------------------------------------------

/// Mean of the derivative-word formula over K points of the circle
/// |s - s0| = r: the Cauchy estimate of the (removable) value at s0.
/// Requires general position on the circle, not at the center. A mean
/// that moves by more than 1e-4 under r -> r/2 is flagged as
/// non-removable.
inline Complex limit_matrix_element(SpectralParameter s0, Parity parity, int m, int n,
                                    const GroupElement& g, double radius, int count,
                                    int grid = 256) {
    if (parity != Parity::even)
        throw parity_error("limits use the spherical-sector formula; parity must be even");
    if (radius <= 0.0 || count < 4) throw error("bad circle parameters");
    auto circle_mean = [&](double r) {
        Complex acc(0.0);
        for (int j = 0; j < count; ++j) {
            double phi = kTwoPi * double(j) / double(count);
            Complex s = s0 + Complex(r * std::cos(phi), r * std::sin(phi));
            TwoPathFormula f = two_path_formula(s, m, n, grid);
            acc += two_path_rhs(f, s, g, grid);
        }
        return acc / double(count);
    };
    Complex full = circle_mean(radius);
    Complex half = circle_mean(radius / 2.0);
    if (std::abs(full - half) > 1e-4 * std::max(1.0, std::abs(full)))
        throw non_removable_error("circle means at r and r/2 disagree: singularity at s0 "
                                  "does not look removable");
    return full;
}

} // namespace hcme

#endif
