#ifndef HCME_JET_HPP
#define HCME_JET_HPP

// Truncated multivariate Taylor arithmetic ("jets"). A jet stores the
// coefficients of a polynomial in d formal variables truncated at total
// degree N; ring operations and analytic compositions (exp, log, complex
// powers) are exact on the retained coefficients. Two index schemes share
// one interface:
//   - dense: every multi-index of total degree <= N, graded-lex order;
//   - multilinear: degree <= 1 per variable (indices are bitmasks), the
//     cheap carrier for mixed first-order derivatives of words.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "hcme/scalar.hpp"

namespace hcme {

class JetShape {
  public:
    int vars;
    int order;
    bool multilinear;
    int size;
    // exponent table, size * vars entries, row-major
    std::vector<std::uint8_t> expo;
    std::vector<int> total_degree;
    // ordered multiplication program: coefficient k of x*y accumulates
    // x[i]*y[j] for every stored triple
    struct MulStep {
        std::int32_t i, j, k;
    };
    std::vector<MulStep> program;

    static const JetShape& get(int vars, int order, bool multilinear) {
        static std::map<std::tuple<int, int, bool>, std::unique_ptr<JetShape>> cache;
        static std::mutex mtx;
        std::lock_guard<std::mutex> lock(mtx);
        auto key = std::make_tuple(vars, order, multilinear);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::unique_ptr<JetShape>(new JetShape(vars, order, multilinear))).first;
        return *it->second;
    }

    int index_of(const std::vector<std::uint8_t>& e) const {
        if (multilinear) {
            int mask = 0;
            for (int v = 0; v < vars; ++v)
                if (e[v]) mask |= 1 << v;
            return mask;
        }
        auto it = index_.find(e);
        return it == index_.end() ? -1 : it->second;
    }

  private:
    std::map<std::vector<std::uint8_t>, int> index_;

    JetShape(int d, int n, bool ml) : vars(d), order(ml ? d : n), multilinear(ml) {
        if (d < 0 || d > 8) throw budget_error("jet variable count out of range (0..8)");
        if (!ml && (n < 0 || n > 16)) throw budget_error("jet order out of range");
        if (ml) {
            size = 1 << d;
            expo.resize(size_t(size) * std::max(d, 1));
            total_degree.resize(size);
            for (int m = 0; m < size; ++m) {
                int deg = 0;
                for (int v = 0; v < d; ++v) {
                    std::uint8_t bit = (m >> v) & 1;
                    if (d > 0) expo[size_t(m) * d + v] = bit;
                    deg += bit;
                }
                total_degree[m] = deg;
            }
            // subset convolution: disjoint index pairs only
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j)
                    if ((i & j) == 0) program.push_back({i, j, i | j});
        } else {
            enumerate(n);
            size = int(index_.size());
            // multiplication program from the index map
            std::vector<std::vector<std::uint8_t>> keys(size);
            for (auto& kv : index_) keys[kv.second] = kv.first;
            std::vector<std::uint8_t> sum(std::max(d, 1));
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j) {
                    if (total_degree[i] + total_degree[j] > n) continue;
                    for (int v = 0; v < std::max(d, 1); ++v)
                        sum[v] = std::uint8_t(keys[i][v] + keys[j][v]);
                    auto it = index_.find(sum);
                    if (it != index_.end()) program.push_back({i, j, it->second});
                }
        }
    }

    // graded-lex enumeration: all multi-indices with total degree <= n
    void enumerate(int n) {
        std::vector<std::vector<std::uint8_t>> all;
        std::vector<std::uint8_t> cur(std::max(vars, 1), 0);
        collect(all, cur, 0, n);
        std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
            int dx = 0, dy = 0;
            for (auto v : x) dx += v;
            for (auto v : y) dy += v;
            if (dx != dy) return dx < dy;
            return x < y;
        });
        expo.clear();
        total_degree.clear();
        int pos = 0;
        for (auto& m : all) {
            index_[m] = pos++;
            int deg = 0;
            for (auto v : m) deg += v;
            total_degree.push_back(deg);
            expo.insert(expo.end(), m.begin(), m.end());
        }
    }

    void collect(std::vector<std::vector<std::uint8_t>>& out, std::vector<std::uint8_t>& cur,
                 int pos, int budget) {
        if (pos == vars || vars == 0) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            cur[pos] = std::uint8_t(v);
            collect(out, cur, pos + 1, budget - v);
        }
        cur[pos] = 0;
    }
};

class Jet {
  public:
    Jet() : shape_(&JetShape::get(0, 0, false)), c_(1, Complex(0.0)) {}

    Jet(const JetShape& shape, Complex value) : shape_(&shape), c_(shape.size, Complex(0.0)) {
        c_[0] = value;
    }

    /// value + the i-th formal variable
    static Jet variable(const JetShape& shape, int i, Complex value) {
        Jet j(shape, value);
        std::vector<std::uint8_t> e(std::max(shape.vars, 1), 0);
        e[i] = 1;
        int pos = shape.index_of(e);
        if (pos < 0) throw budget_error("jet order too small for a variable");
        j.c_[pos] = Complex(1.0);
        return j;
    }

    const JetShape& shape() const { return *shape_; }
    int vars() const { return shape_->vars; }
    int order() const { return shape_->order; }
    Complex value() const { return c_[0]; }
    const std::vector<Complex>& coefficients() const { return c_; }

    Complex coeff(const std::vector<std::uint8_t>& e) const {
        int pos = shape_->index_of(e);
        return pos < 0 ? Complex(0.0) : c_[pos];
    }

    /// coefficient of the i-th first-order monomial
    Complex first_order(int i) const {
        std::vector<std::uint8_t> e(std::max(shape_->vars, 1), 0);
        e[i] = 1;
        return coeff(e);
    }

    /// coefficient of the all-ones monomial: the mixed first derivative
    /// in every variable (what a derivative word reads off)
    Complex mixed_all() const {
        std::vector<std::uint8_t> e(std::max(shape_->vars, 1), shape_->vars ? 1 : 0);
        return coeff(e);
    }

    Jet& operator+=(const Jet& o) {
        check(o);
        for (int i = 0; i < shape_->size; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check(o);
        for (int i = 0; i < shape_->size; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator+=(const Complex& v) {
        c_[0] += v;
        return *this;
    }
    Jet& operator-=(const Complex& v) {
        c_[0] -= v;
        return *this;
    }
    Jet& operator*=(const Complex& v) {
        for (auto& x : c_) x *= v;
        return *this;
    }

    friend Jet operator+(Jet x, const Jet& y) { return x += y; }
    friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
    friend Jet operator+(Jet x, const Complex& v) { return x += v; }
    friend Jet operator+(const Complex& v, Jet x) { return x += v; }
    friend Jet operator-(Jet x, const Complex& v) { return x -= v; }
    friend Jet operator-(const Complex& v, const Jet& x) {
        Jet r = -x;
        r += v;
        return r;
    }
    friend Jet operator*(Jet x, const Complex& v) { return x *= v; }
    friend Jet operator*(const Complex& v, Jet x) { return x *= v; }

    Jet operator-() const {
        Jet r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Jet operator*(const Jet& x, const Jet& y) {
        x.check(y);
        Jet r(*x.shape_, Complex(0.0));
        for (const auto& st : x.shape_->program) r.c_[st.k] += x.c_[st.i] * y.c_[st.j];
        return r;
    }

    Jet& operator*=(const Jet& y) { return *this = *this * y; }

    friend Jet operator/(const Jet& x, const Jet& y) { return x * reciprocal(y); }
    friend Jet operator/(const Complex& v, const Jet& y) { return reciprocal(y) * v; }
    friend Jet operator/(Jet x, const Complex& v) { return x *= (Complex(1.0) / v); }

    /// 1/j by the geometric series in the nilpotent part
    friend Jet reciprocal(const Jet& j) {
        Complex c0 = j.value();
        if (c0 == Complex(0.0)) throw error("jet reciprocal at zero base point");
        Jet u = j / c0;
        u -= Complex(1.0); // nilpotent
        Jet acc(*j.shape_, Complex(1.0));
        Jet pw(*j.shape_, Complex(1.0));
        int top = j.shape_->multilinear ? j.shape_->vars : j.shape_->order;
        double sign = -1.0;
        for (int k = 1; k <= top; ++k) {
            pw *= u;
            acc += pw * Complex(sign);
            sign = -sign;
        }
        return acc / c0;
    }

  private:
    const JetShape* shape_;
    std::vector<Complex> c_;

    void check(const Jet& o) const {
        if (shape_ != o.shape_) throw error("jet shape mismatch");
    }
};

/// sum_k coeffs[k] * u^k for nilpotent u (value() == 0); coeffs[0] is the
/// constant term. Truncation makes the sum finite.
inline Jet nilpotent_series(const Jet& u, const std::vector<Complex>& coeffs) {
    Jet acc(u.shape(), coeffs.empty() ? Complex(0.0) : coeffs[0]);
    Jet pw(u.shape(), Complex(1.0));
    int top = u.shape().multilinear ? u.shape().vars : u.shape().order;
    for (int k = 1; k <= top && k < int(coeffs.size()); ++k) {
        pw *= u;
        acc += pw * coeffs[k];
    }
    return acc;
}

inline Jet exp_analytic(const Jet& j) {
    Complex c0 = j.value();
    Jet u = j;
    u -= c0;
    int top = u.shape().multilinear ? u.shape().vars : u.shape().order;
    std::vector<Complex> cs(top + 1);
    double fact = 1.0;
    for (int k = 0; k <= top; ++k) {
        if (k > 0) fact *= k;
        cs[k] = Complex(1.0 / fact);
    }
    return nilpotent_series(u, cs) * std::exp(c0);
}

inline Jet log_analytic(const Jet& j) {
    Complex c0 = j.value();
    if (c0 == Complex(0.0)) throw error("jet log at zero base point");
    Jet u = j / c0;
    u -= Complex(1.0);
    int top = u.shape().multilinear ? u.shape().vars : u.shape().order;
    std::vector<Complex> cs(top + 1, Complex(0.0));
    for (int k = 1; k <= top; ++k) cs[k] = Complex((k % 2 ? 1.0 : -1.0) / k);
    Jet r = nilpotent_series(u, cs);
    r += std::log(c0);
    return r;
}

/// Principal-branch power j^alpha = c0^alpha * exp(alpha*log(1+u));
/// branch decisions happen only on the order-0 part.
inline Jet pow_analytic(const Jet& j, const Complex& alpha) {
    Complex c0 = j.value();
    if (c0 == Complex(0.0)) throw error("jet power at zero base point");
    Jet u = j / c0;
    u -= Complex(1.0);
    int top = u.shape().multilinear ? u.shape().vars : u.shape().order;
    std::vector<Complex> lg(top + 1, Complex(0.0));
    for (int k = 1; k <= top; ++k) lg[k] = Complex((k % 2 ? 1.0 : -1.0) / k);
    Jet v = nilpotent_series(u, lg) * alpha; // nilpotent
    std::vector<Complex> ex(top + 1);
    double fact = 1.0;
    for (int k = 0; k <= top; ++k) {
        if (k > 0) fact *= k;
        ex[k] = Complex(1.0 / fact);
    }
    return nilpotent_series(v, ex) * std::pow(c0, alpha);
}

} // namespace hcme

#endif
