// Tests for the counter-based random number generator: determinism,
// stream independence, output ranges, and distribution moments.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rotor/rng.hpp>
#include <rotor/util.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <set>
#include <vector>

using rotor::Rng;

TEST_CASE("same seed reproduces the identical bit stream") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(12345), d(12345);
  for (int i = 0; i < 1000; ++i) {
    const double x = c.next_gauss(), y = d.next_gauss();
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  }
}

TEST_CASE("different seeds give different streams") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("stream(seed, i) yields decorrelated per-index generators") {
  Rng a = Rng::stream(7, 0);
  Rng b = Rng::stream(7, 1);
  Rng c = Rng::stream(7, 0);
  CHECK(a.next_u64() != b.next_u64());
  Rng a2 = Rng::stream(7, 0);
  CHECK(a2.next_u64() == c.next_u64());
}

TEST_CASE("sub_seed produces distinct values over many indices") {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 4096; ++i) seen.insert(Rng::sub_seed(99, i));
  CHECK(seen.size() == 4096);
}

TEST_CASE("next_unit lies in [0,1) and next_unit_pos in (0,1]") {
  Rng r(42);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng r2(43);
  for (int i = 0; i < 100000; ++i) {
    const double u = r2.next_unit_pos();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("next_angle lies in [0, 2pi)") {
  Rng r(4242);
  for (int i = 0; i < 100000; ++i) {
    const double a = r.next_angle();
    CHECK(a >= 0.0);
    CHECK(a < rotor::two_pi);
  }
}

TEST_CASE("uniform moments match within statistical bounds") {
  Rng r(7);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.next_unit();
    s += u;
    s2 += u * u;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  // mean of U(0,1): 0.5 with SE = (1/sqrt(12))/sqrt(n); 4-sigma bound.
  CHECK(std::abs(mean - 0.5) < 4.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("gaussian moments match within statistical bounds") {
  Rng r(8);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = r.next_gauss();
    s += g;
    s2 += g * g;
    s4 += g * g * g * g;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  const double kurt = (s4 / n) / (var * var);
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));          // 4-sigma
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
  CHECK(std::abs(kurt - 3.0) < 0.15);  // normal excess kurtosis ~ 0
}
