#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace obfetch {

// FNV-1a, 64-bit. Used for feature hashing and parameter fingerprints; not
// collision resistant and never used where an adversary controls both sides.
inline constexpr uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

inline uint64_t fnv1a64(std::span<const uint8_t> data, uint64_t h = kFnvOffset) {
  for (uint8_t b : data) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = kFnvOffset) {
  return fnv1a64({reinterpret_cast<const uint8_t*>(s.data()), s.size()}, h);
}

}  // namespace obfetch
