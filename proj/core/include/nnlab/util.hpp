#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

namespace nnlab {

// Shortest decimal form that parses back to the same double. Keeps CSV output
// byte-stable across runs without dragging 17-digit noise everywhere.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// splitmix64 step; used to derive independent seed streams from one base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace nnlab
