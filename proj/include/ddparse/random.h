#ifndef DDPARSE_RANDOM_H_
#define DDPARSE_RANDOM_H_

#include <cstdint>
#include <random>

namespace ddparse {

// Uniform draw from [0, n) that does not depend on the standard library's
// distribution implementation, so seeded runs match across toolchains.
inline std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace ddparse

#endif  // DDPARSE_RANDOM_H_
