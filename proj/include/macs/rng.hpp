#pragma once
// Deterministic pseudo-randomness for the whole artifact.
//
// Everything derives from SplitMix64 counter streams and FNV-1a hashing, so
// results are bit-identical across runs, platforms, and thread counts. No
// std::random engines or distributions are used anywhere; libstdc++ makes no
// cross-version guarantees for those.
//
// Scheme (fixed; traces depend on it):
//   splitmix64(x): x += 0x9E3779B97F4A7C15, then the Stafford mix13 finalizer.
//   Stream(seed): successive splitmix64 outputs of an incrementing counter.
//   unit doubles: top 53 bits of the draw mapped to [0,1); symmetric doubles
//   map to [-1,1) via 2u - 1.

#include <cstdint>
#include <string_view>

#include "macs/vec.hpp"

namespace macs {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += kSplitMixGamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

inline constexpr std::uint64_t mix_seed(std::uint64_t a, std::string_view tag) {
    return mix_seed(a, fnv1a64(tag));
}

/// Counter-mode SplitMix64 stream.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kSplitMixGamma;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double next_symmetric() { return 2.0 * next_unit() - 1.0; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

/// Seeded pseudo-random unit direction: d symmetric draws, normalized.
/// Retries with a fresh substream in the (astronomically unlikely) case the
/// draw lands inside the degeneracy ball.
inline Vec random_unit(std::uint64_t seed, int d) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Stream s(mix_seed(seed, attempt));
        Vec v(static_cast<std::size_t>(d));
        for (auto& x : v) x = s.next_symmetric();
        if (!is_zero(v)) return normalized(v);
    }
}

/// Seeded in-place Fisher–Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& items, Stream& s) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(s.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace macs
