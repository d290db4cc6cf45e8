#pragma once

#include <cmath>
#include <cstdint>

// Counter-seeded xoshiro256++ streams. Every sampler takes an explicit
// stream; a stream is fully determined by (seed, path index, channel), so
// ensembles are reproducible regardless of thread count.

namespace nlbm {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
inline std::uint64_t rotl64(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}
}  // namespace detail

class Rng {
  public:
    Rng() : Rng(0, 0, 0) {}

    Rng(std::uint64_t seed, std::uint64_t path, std::uint64_t channel) {
        std::uint64_t x = seed;
        x ^= 0xD1B54A32D192ED03ULL * (path + 1);
        x ^= 0x8CB92BA72F3D8DD7ULL * (channel + 1);
        for (auto& w : s_) w = detail::splitmix64(x);
        have_spare_ = false;
        spare_ = 0.0;
    }

    static Rng stream(std::uint64_t seed, std::uint64_t path, std::uint64_t channel) {
        return Rng(seed, path, channel);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller, one spare cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    std::uint64_t s_[4];
    bool have_spare_;
    double spare_;
};

}  // namespace nlbm
