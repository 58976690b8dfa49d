#pragma once

#include <cstdint>
#include <random>

namespace ncsched {

/// SplitMix64 finalizer; a stateless 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

enum class StreamPurpose : std::uint64_t {
    Arrivals = 1,
    Availability = 2,
    TieBreak = 3,
    Layout = 4,
};

/// Counter-based named substream: the (master seed, replication, purpose)
/// triple fully determines the stream, so replications are independent of
/// execution order and the same arrival/availability draws can be shared
/// across modes for paired comparisons.
inline std::mt19937_64 make_stream(std::uint64_t master_seed,
                                   std::uint64_t replication,
                                   StreamPurpose purpose) {
    std::uint64_t s = mix64(master_seed);
    s = mix64(s ^ mix64(replication + 0x51ED270B27B3E191ull));
    s = mix64(s ^ mix64(std::uint64_t(purpose) + 0xC2B2AE3D27D4EB4Full));
    return std::mt19937_64(s);
}

inline std::uint64_t stream_seed(std::uint64_t master_seed,
                                 std::uint64_t replication,
                                 StreamPurpose purpose) {
    std::uint64_t s = mix64(master_seed);
    s = mix64(s ^ mix64(replication + 0x51ED270B27B3E191ull));
    s = mix64(s ^ mix64(std::uint64_t(purpose) + 0xC2B2AE3D27D4EB4Full));
    return s;
}

}  // namespace ncsched
