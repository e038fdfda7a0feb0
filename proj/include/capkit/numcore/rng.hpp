#pragma once

#include <cstdint>
#include <string>

#include "capkit/numcore/tensor.hpp"

namespace capkit::numcore {

// SplitMix64 (Steele, Lea, Flood 2014). 64-bit state, one multiply-xor
// chain per output; identical seed gives an identical stream on every
// platform, which is what checkpoints and split reproducibility rely on.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via Box-Muller; second draw cached.
    double normal();

    // Modulo reduction; the bias at 64 bits is irrelevant for shuffles.
    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t fnv1a64(const std::string& bytes);

// Glorot/uniform init in +-sqrt(6/(fan_in+fan_out)); weights for x*W layers
// are stored (fan_in x fan_out).
Tensor glorot_uniform(SplitMix64& rng, std::size_t fan_in, std::size_t fan_out);

}  // namespace capkit::numcore
