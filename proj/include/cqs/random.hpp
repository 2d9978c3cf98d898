// Small deterministic generator for experiment ensembles.  splitmix64 keeps
// draws reproducible across platforms and builds, which the byte-identical
// artifact contract needs; std::normal_distribution would tie results to a
// particular standard library.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cqs {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// combine a master seed with stream labels (member index, scale index, ...)
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0xA24BAED4963EE407ULL * (a + 1);
    splitmix64(s);
    s ^= 0x9FB21C651E98DF25ULL * (b + 1);
    splitmix64(s);
    s ^= 0xD6E8FEB86659FD93ULL * (c + 1);
    return splitmix64(s);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so nearby seeds decorrelate
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next() { return splitmix64(state_); }

    // uniform in (0, 1], 53-bit resolution
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace cqs
