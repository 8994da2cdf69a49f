#pragma once

#include "fedmap/common.hpp"

#include <cmath>
#include <random>

namespace fedmap {

// All randomness in an experiment derives from one root seed via named
// sub-streams, so stages can be re-run independently without perturbing
// each other. Stream names in use: "encoder", "init", "tasks", "routes",
// "data".

inline std::uint64_t substream_seed(std::uint64_t root, std::string_view name) {
    std::uint64_t h = fnv1a64(name);
    h = fnv1a64(&root, sizeof(root), h);
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t root, std::string_view name,
                                    std::uint64_t index) {
    std::uint64_t h = substream_seed(root, name);
    h = fnv1a64(&index, sizeof(index), h);
    return h;
}

/// Standard-normal sampler on top of mt19937_64 (Box-Muller). mt19937_64
/// output is fully specified by the standard, so the generated sequence is
/// identical across processes for a given seed; std::normal_distribution
/// gives no such guarantee.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so log() is finite; u2 in [0,1).
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double uniform01() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fedmap
