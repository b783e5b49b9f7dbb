#ifndef HCME_TEST_HELPERS_HPP
#define HCME_TEST_HELPERS_HPP

#include <vector>

#include "hcme/principal_series.hpp"
#include "hcme/sampling.hpp"

namespace hcme_test {

using namespace hcme;

/// grid samples of a finite Fourier sum
inline std::vector<Complex> grid_samples(const KTypeVector& v, int grid) {
    std::vector<Complex> out(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) {
        double th = kTwoPi * double(k) / double(grid);
        Complex acc(0.0);
        for (auto& [n, c] : v.coefficients())
            acc += c * Complex(std::cos(n * th), std::sin(n * th));
        out[std::size_t(k)] = acc;
    }
    return out;
}

inline KTypeVector random_band_limited(Parity p, int max_mode, Rng& rng) {
    KTypeVector v(p);
    for (int n = -max_mode; n <= max_mode; ++n) {
        if (!mode_matches(p, n)) continue;
        v.set(n, rng.complex_in(-1, 1, -1, 1));
    }
    return v;
}

inline double linf_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// trapezoid L2 norm on the circle grid
inline double l2_norm(const std::vector<Complex>& f) {
    double s = 0.0;
    for (auto& v : f) s += std::norm(v);
    return std::sqrt(s / double(f.size()));
}

} // namespace hcme_test

#endif
