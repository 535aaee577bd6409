#pragma once

// Random streams for the simulation harness.
//
// Replicate r of a run with seed S draws from std::mt19937_64 seeded with
// splitmix64 applied to (S, r). Uniforms take the top 53 bits of one engine
// output; normals use the cosine branch of Box-Muller on two uniforms.
// Results are reproducible for a given binary and standard library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lpo_pi0 {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_low() noexcept { return 1.0 - uniform(); }

    double normal() noexcept
    {
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_low()));
        return radius * std::cos(2.0 * std::numbers::pi * uniform());
    }

    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace lpo_pi0
