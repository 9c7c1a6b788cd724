#pragma once
// FNV-1a 64-bit content digests, rendered as fixed-width hex.
// Used for tool-result payload fingerprints and reproducibility checks.

#include <cstdint>
#include <string>
#include <string_view>

namespace finmcp {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = kFnvOffset) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

inline std::string digest_hex(std::string_view data) {
    std::uint64_t h = fnv1a64(data);
    static const char* hexd = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hexd[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace finmcp
