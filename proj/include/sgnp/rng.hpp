#pragma once

/// @file rng.hpp
/// @brief Portable seeded random source.
///
/// The engine is xoshiro256** seeded through SplitMix64. All distribution
/// helpers are implemented here rather than with <random> distributions, whose
/// output is implementation-defined; this keeps generated instances and solver
/// runs identical across standard libraries and platforms.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace sgnp {

/// SplitMix64 step; also used as a 64-bit mixing function.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over a tag; used to derive independent named streams from one seed.
constexpr std::uint64_t stream_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    /// Stream for one entity kind: seed and tag are mixed, so streams for
    /// different tags never share state even for equal seeds.
    static Rng stream(std::uint64_t seed, std::string_view tag) noexcept {
        std::uint64_t s = seed ^ stream_tag(tag);
        return Rng(splitmix64(s));
    }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Unbiased (bitmask rejection).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
        const std::uint64_t mask = fill_mask(bound - 1);
        for (;;) {
            const std::uint64_t x = (*this)() & mask;
            if (x < bound) return x;
        }
    }

    /// Uniform integer in the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw std::invalid_argument("Rng::uniform_int: hi < lo");
        const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span == max()) return static_cast<std::int64_t>((*this)());
        return lo + static_cast<std::int64_t>(below(span + 1));
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Normal deviate by the Marsaglia polar method (one value per call).
    double normal(double mean, double stddev) noexcept {
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
    }

    /// Fisher-Yates shuffle, highest index first.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    static constexpr std::uint64_t fill_mask(std::uint64_t x) noexcept {
        x |= x >> 1;
        x |= x >> 2;
        x |= x >> 4;
        x |= x >> 8;
        x |= x >> 16;
        x |= x >> 32;
        return x;
    }

    std::uint64_t s_[4]{};
};

} // namespace sgnp
