#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "advnet/errors.hpp"

namespace advnet {

// SplitMix64 finalizer.  Used to derive independent stream seeds from a
// master seed; the constants are the standard ones.
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Stable sub-stream seed: a (master, index, tag) triple always maps to the
// same seed, independent of evaluation order or thread count.  This is what
// makes simulation results reproducible across worker counts.
inline uint64_t stream_seed(uint64_t master, uint64_t index,
                            std::string_view tag) {
  return mix64(master ^ mix64(index ^ 0x6A09E667F3BCC908ull) ^ fnv1a(tag));
}

// Deterministic RNG with portable integer draws.
//
// std::mt19937_64's output sequence is fully specified by the standard, so
// seeding it identically gives identical draws on every platform.  The
// uniform draws below deliberately avoid std::uniform_int_distribution,
// whose value mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // Uniform in [0, bound); unbiased via rejection sampling.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw UsageError("Rng::below: bound must be positive");
    if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
    const uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t r = next();
      if (r >= reject_below) return r % bound;
    }
  }

  // Uniform in [1, bound).
  uint64_t nonzero_below(uint64_t bound) {
    if (bound < 2) throw UsageError("Rng::nonzero_below: bound must exceed 1");
    return 1 + below(bound - 1);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace advnet
