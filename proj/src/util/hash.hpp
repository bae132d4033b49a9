#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace mlmkit {

struct Hash128 {
  uint64_t lo = 0;
  uint64_t hi = 0;
  bool operator==(const Hash128&) const = default;
};

struct Hash128Hasher {
  size_t operator()(const Hash128& h) const {
    return static_cast<size_t>(h.lo ^ (h.hi * 0x9E3779B97F4A7C15ULL));
  }
};

// MurmurHash3 x64 128-bit, one-shot.
Hash128 murmur3_128(const void* data, size_t len, uint64_t seed);

inline Hash128 murmur3_128(std::string_view s, uint64_t seed) {
  return murmur3_128(s.data(), s.size(), seed);
}

std::string to_hex(const Hash128& h);

// Content hash of a file, chunk-chained so large files never need one buffer.
// Only meaningful for equality comparison between outputs of this tool.
Hash128 hash_file(const std::string& path);

}  // namespace mlmkit
