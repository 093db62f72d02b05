#pragma once

#include <cmath>
#include <cstdint>

namespace fggs {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stateless counter-based stream: any (seed, stream, counter) triple maps to
// an independent 64-bit value, so partitioned generation stays deterministic
// regardless of evaluation order.
inline uint64_t hash3(uint64_t seed, uint64_t stream, uint64_t counter) {
  return splitmix64(splitmix64(seed ^ (stream * 0xd1b54a32d192ed03ULL)) ^
                    (counter * 0x8cb92ba72f3d8dd7ULL));
}

// Sequential generator for inherently serial processes (forest fire burns).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) without modulo bias (Lemire reduction).
  uint64_t next_below(uint64_t bound) {
    return uint64_t((__uint128_t(next_u64()) * bound) >> 64);
  }

 private:
  uint64_t state_;
};

inline double u64_to_double(uint64_t x) { return double(x >> 11) * 0x1.0p-53; }

inline uint64_t u64_below(uint64_t x, uint64_t bound) {
  return uint64_t((__uint128_t(x) * bound) >> 64);
}

// Number of failures before a success of probability q, i.e.
// P(k) = (1-q)^k q. Used both for edge skipping and burn fan-out (where the
// "failure" probability is p_burn).
inline uint64_t geometric_skip(double u, double q) {
  if (q >= 1.0) return 0;
  if (q <= 0.0) return UINT64_MAX;
  double k = std::floor(std::log1p(-u) / std::log1p(-q));
  if (k >= 9.2e18) return UINT64_MAX;
  return uint64_t(k);
}

}  // namespace fggs
