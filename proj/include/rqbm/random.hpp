#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rqbm {

/// Seeded generator used for every random draw in the toolkit. The engine
/// output is fixed by the standard; the uniform mapping below is ours, so
/// draws are identical across standard libraries.
class Rng {
public:
    static constexpr std::string_view name = "mt19937_64/u53 v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do r = engine_(); while (r >= limit);
        return r % n;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace rqbm
