#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace chaineval {

// 64-bit FNV-1a over raw bytes. Stable across platforms and runs; used to
// stamp configs and reports for provenance, not for security.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// fnv1a64 rendered as 16 lowercase hex digits.
std::string fingerprint_hex(std::string_view bytes);

}  // namespace chaineval
