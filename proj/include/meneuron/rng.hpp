#pragma once

#include <cstdint>
#include <random>

#include "meneuron/vector3.hpp"

namespace meneuron {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-trajectory seed from a master seed and a stable index, so results do
/// not depend on which worker ran which trajectory.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Owns the generator and the normal distribution state for one stream of
/// thermal-field samples.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(mix64(seed)) {}

    double next() { return normal_(rng_); }
    Vector3 next3() {
        const double a = normal_(rng_);
        const double b = normal_(rng_);
        const double c = normal_(rng_);
        return {a, b, c};
    }

private:
    Rng rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace meneuron
