#pragma once

#include <cstdint>
#include <random>

#include "qdflow/complex_util.hpp"

namespace qdflow {

// Seeded sampler with bit-level deterministic uniforms (distribution objects
// from <random> are not pinned down by the standard).
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform w.r.t. area on the annulus rlo <= |z| <= rhi.
    C annulus(double rlo, double rhi) {
        const double r = std::sqrt(uniform(rlo * rlo, rhi * rhi));
        return std::polar(r, uniform(0.0, 2.0 * pi));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace qdflow
