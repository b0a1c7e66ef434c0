#pragma once

#include <cstdint>

namespace agp {

/// Counter-based random streams. A key names a stream; the i-th draw of that
/// stream is a pure function of (key, i), so draws can be taken in any order
/// and any number of times with the same result.
namespace rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Key of the child stream `tag` of `parent`.
constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t tag) noexcept {
  return splitmix64(splitmix64(parent) ^ splitmix64(tag ^ 0xD1B54A32D192ED03ULL));
}

/// Draw `counter` of stream `key`, uniform on the open interval (0, 1). This is
/// output `counter` of a SplitMix64 generator seeded with `key`.
constexpr double uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  const std::uint64_t x = splitmix64(key + counter * 0x9E3779B97F4A7C15ULL);
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rng
}  // namespace agp
