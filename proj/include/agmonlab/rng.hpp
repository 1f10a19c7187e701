#ifndef AGMONLAB_RNG_HPP
#define AGMONLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace agml {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with a hand-rolled Gaussian sampler. Self-contained so that
/// identical seeds reproduce identical streams on every platform.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        have_cached_ = false;
    }

    /// Independent stream derived from (seed, index); used for per-batch RNGs
    /// so reductions are schedule independent.
    static Rng stream(uint64_t seed, uint64_t index) {
        uint64_t sm = seed;
        uint64_t a = splitmix64(sm);
        sm = a ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(splitmix64(sm) ^ (index * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL));
    }

    uint64_t next_u64() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in (0,1); never returns 0 or 1.
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via Marsaglia polar, one cached value.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, w, r2;
        do {
            u = 2.0 * uniform() - 1.0;
            w = 2.0 * uniform() - 1.0;
            r2 = u * u + w * w;
        } while (r2 >= 1.0 || r2 == 0.0);
        double f = std::sqrt(-2.0 * std::log(r2) / r2);
        cached_ = w * f;
        have_cached_ = true;
        return u * f;
    }

  private:
    uint64_t s_[4]{};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace agml

#endif
