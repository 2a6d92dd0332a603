#pragma once

#include <cmath>
#include <cstdint>

#include "rotor/util.hpp"

namespace rotor {

// Counter-based SplitMix64 generator. Every draw is a pure function of
// (initial counter, draw index), so streams derived from (seed, index) are
// reproducible bit-for-bit regardless of thread scheduling or platform.
// std::normal_distribution is implementation-defined; Box-Muller here is not.
class Rng {
 public:
  explicit Rng(uint64_t seed) : counter_(seed) {}

  // Decorrelated stream for one unit of work (e.g. one atom of an ensemble).
  static Rng stream(uint64_t seed, uint64_t index) {
    uint64_t z = mix(seed) ^ mix(index * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
    return Rng(mix(z));
  }

  // Fresh top-level seed for a sub-run (e.g. one sweep point).
  static uint64_t sub_seed(uint64_t seed, uint64_t index) {
    return mix(mix(seed) + (index + 1) * 0x9e3779b97f4a7c15ull);
  }

  uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix(counter_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe under log().
  double next_unit_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_angle() { return two_pi * next_unit(); }

  // Standard normal via Box-Muller (no rejection, fixed draw count: two
  // uniforms produce a cached pair).
  double next_gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = two_pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t counter_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rotor
