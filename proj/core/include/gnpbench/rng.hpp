#pragma once

#include <cassert>
#include <cstdint>

namespace gnp {

// 64-bit finalizer used both as the PRNG output function and as the stream
// mixing function. Identical on every platform; never use std::random
// distributions on top of this (their output is implementation-defined).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// splitmix64. Small state, fully specified output sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // [0, 1), 53-bit mantissa
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // uniform in [0, bound), unbiased via rejection on the top 32 bits
  std::uint32_t below(std::uint32_t bound) {
    assert(bound > 0);
    const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
    for (;;) {
      const std::uint32_t r = static_cast<std::uint32_t>(next_u64() >> 32);
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

// Named-stream derivation: a stream seed is the left fold of its components,
//   h0 = mix64(master), h_{k+1} = mix64(h_k ^ (mix64(part_k) + 0x9e3779b97f4a7c15)).
// Streams with distinct component tuples are independent for all practical
// purposes, and the derivation is order-sensitive.
inline std::uint64_t fold_seed(std::uint64_t h, std::uint64_t part) {
  return mix64(h ^ (mix64(part) + 0x9e3779b97f4a7c15ull));
}

template <class... Parts>
Rng make_stream(std::uint64_t master, Parts... parts) {
  std::uint64_t h = mix64(master);
  ((h = fold_seed(h, static_cast<std::uint64_t>(parts))), ...);
  return Rng(h);
}

// Stream purposes. Keyed so that parallel and serial schedules draw the same
// numbers for the same decision.
enum StreamPurpose : std::uint64_t {
  kStreamInit = 1,      // (kStreamInit, group index)
  kStreamSelect = 2,    // (kStreamSelect, generation, draw index)
  kStreamCrossover = 3, // (kStreamCrossover, generation, pair index)
  kStreamMutate = 4,    // (kStreamMutate, generation, offspring index)
};

}  // namespace gnp
