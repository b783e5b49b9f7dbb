#ifndef HCME_FFT_HPP
#define HCME_FFT_HPP

// Minimal iterative radix-2 FFT for the power-of-two circle grids.

#include <vector>

#include "hcme/scalar.hpp"

namespace hcme {

inline bool is_power_of_two(std::size_t n) { return n && (n & (n - 1)) == 0; }

/// In-place forward DFT: X_k = sum_j x_j e^{-2 pi i jk / n}.
inline void fft_inplace(std::vector<Complex>& x, bool inverse = false) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n)) throw error("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = (inverse ? 1.0 : -1.0) * kTwoPi / double(len);
        Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Complex u = x[i + k];
                Complex v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& v : x) v /= double(n);
}

/// Fourier coefficients of grid samples f(2 pi k / n): c_m = (1/n) sum_k
/// f_k e^{-2 pi i mk/n}, returned for m in [-n/2, n/2) with c[m + n/2].
inline std::vector<Complex> fourier_coefficients(std::vector<Complex> samples) {
    const std::size_t n = samples.size();
    fft_inplace(samples);
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        long m = long(k) <= long(n) / 2 - 1 ? long(k) : long(k) - long(n);
        out[std::size_t(m + long(n) / 2)] = samples[k] / double(n);
    }
    return out;
}

} // namespace hcme

#endif
