#pragma once

#include <cstdint>
#include <random>

namespace goat {

using Rng = std::mt19937_64;

// Independent streams derived from one root seed. Each purpose gets its own
// tag so e.g. the split can be reproduced without replaying training.
enum class Stream : std::uint64_t {
  split = 1,
  init = 2,
  shuffle = 3,
  edge = 4,
  validation = 5,
  eval = 6,
  cluster = 7,
  generator = 8,
};

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t a = 0,
                                    std::uint64_t b = 0) noexcept {
  std::uint64_t h = mix64(root ^ mix64(static_cast<std::uint64_t>(stream)));
  h = mix64(h ^ a);
  return mix64(h ^ (b * 0xd6e8feb86659fd93ULL));
}

inline Rng make_rng(std::uint64_t root, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(derive_seed(root, stream, a, b));
}

}  // namespace goat
