#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace longform {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-file seed: FNV-1a of the stem mixed with the global seed. Independent
// of processing order, so worker count never changes the draws.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stem) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : stem) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(global_seed ^ splitmix64(h));
}

// Uniform in [0, 1) from the top 53 bits. The standard distributions are
// implementation-defined, mt19937_64 is not.
inline double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace longform
