#pragma once

#include <bit>
#include <cstdint>

namespace skewlab {

// Every random stream in the project is keyed by a single 64-bit seed.
// Sub-streams are derived with derive_seed(parent, stream): one
// splitmix64 round over the parent xor the mixed stream index. A master
// seed plus the documented stream indices is enough to replay any grid
// cell in isolation.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t parent, uint64_t stream) {
    return splitmix64(parent ^ splitmix64(stream));
}

inline uint64_t derive_seed(uint64_t parent, double stream) {
    return derive_seed(parent, std::bit_cast<uint64_t>(stream));
}

}  // namespace skewlab
