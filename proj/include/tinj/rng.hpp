#pragma once

#include <cstdint>

namespace tinj {

/// SplitMix64 counter-based stream. Per-shot substreams are derived from
/// (seed, shot index) so serial and parallel runs draw identical values.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(mix(seed, index));
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound must be small against 2^64.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        SplitMix64 h(a ^ (0x9E3779B97F4A7C15ULL + (b << 1)));
        h.next();
        return h.next() ^ b;
    }

  private:
    std::uint64_t state_;
};

}  // namespace tinj
