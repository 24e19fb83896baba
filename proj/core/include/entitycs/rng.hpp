#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace entitycs {

inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ull;

inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Per-record seed: records are processed independently, so parallel
// execution order cannot change any draw.
inline uint64_t derive_seed(uint64_t global_seed, std::string_view record_id) {
  return splitmix64(global_seed ^ fnv1a64(record_id));
}

// mt19937_64 wrapper with fixed draw procedures. std::uniform_*_distribution
// is not bit-stable across standard libraries, so every consumer (and every
// reference oracle) uses exactly these:
//   next_double: 53-bit mantissa in [0,1)
//   bounded(n):  next_u64() % n
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // n must be > 0. Modulo bias is below 2^-50 for the n used here.
  uint64_t bounded(uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace entitycs
