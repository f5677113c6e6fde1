#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dsiht {

/**
 * Seedable generator with platform-independent output. The engine is
 * std::mt19937_64 (fully specified by the standard); the distributions are
 * implemented here because the std:: ones are not portable across library
 * implementations.
 *
 * A (seed, stream) pair selects an independent substream so that one
 * replication seed can drive several generators.
 */
class Rng
{
public:
    enum class Stream : std::uint64_t
    {
        Design = 1,
        Coefficients = 2,
        Noise = 3,
        Test = 99,
    };

    explicit Rng(std::uint64_t seed, Stream stream = Stream::Test)
        : engine_(mix(seed, static_cast<std::uint64_t>(stream)))
    {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return draw % bound;
    }

    /// Standard normal via the Marsaglia polar method.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

    /// +1 or -1 with equal probability.
    double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream)
    {
        // splitmix64 finalizer over seed and stream
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace dsiht
