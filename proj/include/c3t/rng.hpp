#ifndef C3T_RNG_HPP
#define C3T_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace c3t {

// splitmix64 step; used to derive independent stream seeds from one key.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Engine for one named sub-stream (arrival / efficacy / toxicity / policy).
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t key = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    std::uint64_t a = splitmix64(key);
    std::uint64_t b = splitmix64(key);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

// Uniform in [0,1) from the top 53 bits; bit-stable across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// FNV-1a; stable across builds, unlike std::hash.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Per-replication seed: mixes base seed, policy name and replication index.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view policy, int replication) {
    std::uint64_t key = base_seed ^ fnv1a(policy);
    key ^= 0x632be59bd9b4e019ULL * (static_cast<std::uint64_t>(replication) + 1);
    return splitmix64(key);
}

} // namespace c3t

#endif
