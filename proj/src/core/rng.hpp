#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace td {

/// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
/// <random> distributions so that seeded results are bit-identical across
/// compilers and platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Standard normal via Box-Muller on the splitmix stream.
    double next_normal() {
        double u1 = next_unit();
        double u2 = next_unit();
        while (u1 <= 0.0) u1 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    /// Integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

  private:
    uint64_t state_;
};

/// FNV-1a hash of a stream tag.
inline uint64_t tag_hash(std::string_view tag) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Derives a per-component seed from a master seed and a stream tag.
/// Every source of randomness in the pipeline draws from
/// sub_seed(master, tag) for a documented tag, so a single --seed
/// reproduces every intermediate result.
inline uint64_t sub_seed(uint64_t master, std::string_view tag) {
    Rng r(master ^ tag_hash(tag));
    return r.next_u64();
}

}  // namespace td
