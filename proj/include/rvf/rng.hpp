#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace rvf {

/// Counter-based generator: output i is a SplitMix64 finalizer applied to
/// key + i * golden-gamma. Streams are derived by hashing a stream id into a
/// fresh key, so every consumer gets an independent, order-free sequence.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed = 0) noexcept : key_(mix(seed)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

    CounterRng split(std::uint64_t stream) const noexcept {
        CounterRng child;
        child.key_ = mix(key_ ^ mix(stream + kGamma));
        return child;
    }

    CounterRng split(std::string_view stream) const noexcept { return split(hash(stream)); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t hash(std::string_view s) noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace rvf
