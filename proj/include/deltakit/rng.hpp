#pragma once

// Seeded, allocation-free RNG (splitmix64 + xoshiro256**). Every sampling
// loop derives a per-index stream from (seed, index), so results do not
// depend on how work is split across threads.

#include <cmath>
#include <cstdint>

#include "deltakit/linalg.hpp"

namespace dk {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(sm);
  }

  static Rng substream(uint64_t seed, uint64_t index) {
    uint64_t sm = seed;
    uint64_t a = splitmix64(sm);
    uint64_t mixed = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
    return Rng(mixed);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    // Box-Muller; discards the paired value for simplicity
    double u1 = uniform01(), u2 = uniform01();
    u1 = (u1 <= 0.0) ? 0x1.0p-53 : u1;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Vec point_in_box(const Vec& lo, const Vec& hi) {
    Vec p(lo.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = uniform(lo[i], hi[i]);
    return p;
  }

  Vec unit_vector(int dim) {
    Vec v(dim);
    double n = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      n = norm2(v);
    } while (n < 1e-12);
    scale(v, 1.0 / n);
    return v;
  }

  CVec unit_complex_vector(int n) { return to_complex(unit_vector(2 * n)); }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace dk
