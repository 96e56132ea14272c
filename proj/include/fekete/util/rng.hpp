#pragma once

#include <cstdint>

namespace fekete {

// Counter-based random words in the spirit of Salmon et al. (Random123):
// every output is a pure function of (seed, stream, counter), so draws can be
// assigned to work items by index and the results never depend on thread
// scheduling. The mixer is the splitmix64 finalizer applied twice.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline uint64_t counter_word(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t h = mix64(seed ^ 0x243F6A8885A308D3ULL);
    h = mix64(h ^ stream);
    return mix64(h ^ counter);
}

// Uniform double in [0,1) from the top 53 bits.
inline double counter_uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
    return static_cast<double>(counter_word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

}  // namespace fekete
