#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qpv {

// FNV-1a over raw bytes. Stable across platforms; used to key runs and
// sweep cells by their canonical config text.
inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string to_hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace qpv
