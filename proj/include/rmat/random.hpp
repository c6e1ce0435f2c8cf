/*******************************************************************************
 * include/rmat/random.hpp
 *
 * Keyed, counter-based random streams. A stream is addressed by a key (seed
 * plus any number of 64-bit coordinates such as a block index or a recursion
 * path); its i-th output depends only on the key and i, so any stream can be
 * regenerated in isolation by any worker.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rmat {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hashes a sequence of words into a stream key. Order-sensitive.
constexpr uint64_t hash_key(std::initializer_list<uint64_t> words) {
    uint64_t h = 0x243f6a8885a308d3ULL;
    for (uint64_t w : words)
        h = mix64(h ^ mix64(w + 0x9e3779b97f4a7c15ULL));
    return h;
}

class stream {
public:
    using result_type = uint64_t;

    static constexpr uint64_t gamma = 0x9e3779b97f4a7c15ULL;

    constexpr explicit stream(uint64_t key) : key_(key) {}

    /// Stream for coordinates (seed, coords...).
    static constexpr stream keyed(std::initializer_list<uint64_t> words) {
        return stream(hash_key(words));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint64_t>::max(); }

    constexpr result_type operator()() { return next(); }

    constexpr uint64_t next() {
        return mix64(key_ + gamma * ++counter_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    constexpr uint64_t counter() const { return counter_; }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

} // namespace rmat
