#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rotor {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

// sin(pi*x) with argument reduction, so integer x give exactly +-0.0.
inline double sin_pi(double x) {
  double n = std::nearbyint(x);
  double r = x - n;  // |r| <= 0.5 and r == 0 exactly when x is integral
  double s = std::sin(pi * r);
  bool odd = std::fabs(std::fmod(n, 2.0)) == 1.0;
  return odd ? -s : s;
}

// sin(pi*x)/(pi*x); exactly 1 at x = 0 and exactly +-0 at nonzero integers.
inline double sinc_pi(double x) {
  if (x == 0.0) return 1.0;
  return sin_pi(x) / (pi * x);
}

// Reduce an angle to [0, 2pi). fmod is exact; the correction add can round up
// to exactly 2pi for tiny negative inputs, hence the final clamp.
inline double wrap_2pi(double x) {
  double y = std::fmod(x, two_pi);
  if (y < 0.0) y += two_pi;
  if (y >= two_pi) y -= two_pi;
  return y;
}

struct LinFit {
  double slope;
  double intercept;
  double r2;  // coefficient of determination; 1 for an exact fit or zero-variance y
};

// Ordinary least squares y = slope*x + intercept.
// Throws std::invalid_argument when fewer than 2 points or all x coincide.
inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0.0) {
    f.r2 = 1.0;
  } else {
    const double ss_res = syy - f.slope * sxy;
    f.r2 = 1.0 - ss_res / syy;
  }
  return f;
}

// FNV-1a 64-bit content digest.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace rotor
