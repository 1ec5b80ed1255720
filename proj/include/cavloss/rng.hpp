#pragma once

#include <cstdint>
#include <random>

namespace cavloss {

/// Seedable, reproducible uniform generator. Doubles are produced directly
/// from the top 53 bits of mt19937_64 output so that streams are identical
/// across platforms and standard-library implementations.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform()
    {
        return (engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

private:
    std::mt19937_64 engine_;
};

} // namespace cavloss
