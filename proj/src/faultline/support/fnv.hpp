#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace faultline::support {

// FNV-1a, 64-bit. Stable across platforms; used wherever a reproducible
// content hash is needed (config fingerprints, deterministic choices keyed
// by point id).
constexpr uint64_t fnv1a64(std::string_view data) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

inline std::string fnv1a64_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace faultline::support
