#ifndef PERSUASION_COMMON_HASHING_H_
#define PERSUASION_COMMON_HASHING_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace persuasion {

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
constexpr std::uint64_t Fnv1a64(std::string_view data,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace persuasion

#endif  // PERSUASION_COMMON_HASHING_H_
