#ifndef HCME_SAMPLING_HPP
#define HCME_SAMPLING_HPP

// Deterministic sample generation. splitmix64 is pinned here so that
// seeded sweeps produce identical bytes on every platform; the standard
// distributions are implementation-defined and not used.

#include <cstdint>
#include <vector>

#include "hcme/group.hpp"
#include "hcme/scalar.hpp"

namespace hcme {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Complex complex_in(double re_lo, double re_hi, double im_lo, double im_hi) {
        double re = uniform(re_lo, re_hi);
        double im = uniform(im_lo, im_hi);
        return {re, im};
    }

    /// independent substream derived from this state and a stream tag
    Rng fork(std::uint64_t tag) { return Rng(next() ^ (0x517cc1b727220a95ULL * (tag + 1))); }

  private:
    std::uint64_t state_;
};

/// k(theta1) a(t) k(theta2) with theta uniform and t uniform on [0.2, 1.8]:
/// the standard well-conditioned sample window.
inline GroupElement sample_group(Rng& rng, double t_lo = 0.2, double t_hi = 1.8) {
    double th1 = rng.uniform(0.0, kTwoPi);
    double t = rng.uniform(t_lo, t_hi);
    double th2 = rng.uniform(0.0, kTwoPi);
    return compose(GroupElement::rotation(th1),
                   compose(GroupElement::hyperbolic(t), GroupElement::rotation(th2)));
}

inline std::vector<GroupElement> sample_group_list(Rng& rng, int count, double t_lo = 0.2,
                                                   double t_hi = 1.8) {
    std::vector<GroupElement> out;
    out.reserve(std::size_t(count));
    for (int i = 0; i < count; ++i) out.push_back(sample_group(rng, t_lo, t_hi));
    return out;
}

/// Generic spectral parameters: bounded real part, imaginary part bounded
/// away from the real axis where the exceptional set lives.
inline Complex sample_generic_s(Rng& rng) {
    double re = rng.uniform(-1.2, 1.2);
    double im = rng.uniform(0.3, 1.6);
    return {re, im};
}

} // namespace hcme

#endif
