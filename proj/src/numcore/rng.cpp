#include "capkit/numcore/rng.hpp"

#include <cmath>
#include <numbers>

namespace capkit::numcore {

double SplitMix64::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

Tensor glorot_uniform(SplitMix64& rng, std::size_t fan_in, std::size_t fan_out) {
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t({fan_in, fan_out});
    for (double& v : t.data()) v = rng.uniform(-bound, bound);
    return t;
}

}  // namespace capkit::numcore
