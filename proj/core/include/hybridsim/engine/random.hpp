#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hybridsim/errors.hpp"

namespace hybridsim::engine {

/// SplitMix64 mixing step; used to spread (seed, stream) pairs into
/// well-separated generator seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Inverse-transform exponential sample from a uniform draw in (0, 1).
/// Split out so tests can drive the transform with chosen uniforms.
inline double exponential_from_uniform(double u, double rate) {
    if (rate <= 0.0)
        throw LawError("exponential law needs a positive rate, got "
                       + std::to_string(rate));
    return -std::log(u) / rate;
}

/// Deterministic random stream: the same (seed, stream) pair produces the
/// same draws on every platform.  Replications use their index as the stream,
/// which keeps runs independent of execution order and thread count.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t state = seed ^ (0xA3EC647659359ACDULL * (stream + 1));
        splitmix64(state);
        generator_.seed(splitmix64(state));
    }

    /// Uniform draw in the open interval (0, 1): never 0, never 1, so logs
    /// and divisions downstream are always safe.
    double uniform_open() {
        std::uint64_t bits = generator_();
        return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double exponential(double rate) {
        return exponential_from_uniform(uniform_open(), rate);
    }

private:
    std::mt19937_64 generator_;
};

}  // namespace hybridsim::engine
