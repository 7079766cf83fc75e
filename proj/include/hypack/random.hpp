#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hypack {

/// SplitMix64 stream (Steele, Lea, Flood 2014), version 1.
///
/// The generator and the derived variates below are fully specified here so
/// that a sample drawn from a given seed is identical across platforms and
/// standard libraries; the `<random>` distributions do not guarantee that.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class RandomStream {
public:
    static constexpr int version = 1;

    explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    /// Standard normal variate via Box-Muller; the second variate is discarded
    /// so that every call consumes exactly two words of the stream.
    double normal() noexcept {
        const double u1 = uniform_open_zero();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Poisson variate by Knuth's product method, applied to chunks of mean at
    /// most 256 (a sum of independent Poisson variables is Poisson).
    std::uint64_t poisson(double mean) noexcept {
        std::uint64_t total = 0;
        while (mean > 0.0) {
            const double chunk = mean > 256.0 ? 256.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            double product = uniform_open_zero();
            while (product > limit) {
                ++total;
                product *= uniform_open_zero();
            }
        }
        return total;
    }

    /// Independent child stream; the parent advances by one word.
    RandomStream split() noexcept { return RandomStream(next_u64() ^ 0x6A09E667F3BCC909ULL); }

private:
    std::uint64_t state_;
};

}  // namespace hypack
