#include "rotor/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace rotor {

namespace {

constexpr int kTableNodes = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Fold a complex kick C = A_raw e^{i psi_raw} so that psi lands in
// (-pi/2, pi/2] and the amplitude keeps the remaining sign. Real-negative C
// maps to (A < 0, psi = 0), which keeps symmetric pulses phase-free across
// their negative lobes.
void fold(double re, double im, double* amp, double* psi) {
  const double mag = std::hypot(re, im);
  if (mag == 0.0) {
    *amp = 0.0;
    *psi = 0.0;
    return;
  }
  double a = std::atan2(im, re);
  if (a > 0.5 * pi) {
    *amp = -mag;
    *psi = a - pi;
  } else if (a <= -0.5 * pi) {
    *amp = -mag;
    *psi = a + pi;
  } else {
    *amp = mag;
    *psi = a;
  }
}

}  // namespace

void PulseShape::validate() const {
  switch (kind) {
    case Kind::Delta:
      return;
    case Kind::Square:
      if (!(duty > 0.0 && duty < 1.0))
        throw std::invalid_argument("PulseShape: square duty must satisfy 0 < eta < 1");
      return;
    case Kind::Sampled: {
      if (times.size() != amplitudes.size())
        throw std::invalid_argument("PulseShape: times/amplitudes length mismatch");
      if (times.size() < 2)
        throw std::invalid_argument("PulseShape: sampled pulse needs >= 2 points");
      for (size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(amplitudes[i]))
          throw std::invalid_argument("PulseShape: non-finite sample");
        if (std::fabs(times[i]) >= 0.5)
          throw std::invalid_argument("PulseShape: sample times must satisfy |tau| < 0.5");
        if (i > 0 && !(times[i] > times[i - 1]))
          throw std::invalid_argument("PulseShape: sample times must be strictly increasing");
      }
      return;
    }
  }
}

double PulseShape::area() const {
  switch (kind) {
    case Kind::Delta:
      return 1.0;
    case Kind::Square:
      return duty;
    case Kind::Sampled: {
      double a = 0.0;
      for (size_t i = 1; i < times.size(); ++i)
        a += 0.5 * (amplitudes[i] + amplitudes[i - 1]) * (times[i] - times[i - 1]);
      return a;
    }
  }
  return 0.0;
}

double PulseShape::support() const {
  switch (kind) {
    case Kind::Delta:
      return 0.0;
    case Kind::Square:
      return duty;
    case Kind::Sampled:
      return times.back() - times.front();
  }
  return 0.0;
}

void KickProfile::exact_complex(double rho, double* re, double* im) const {
  // trapezoid of f(tau) e^{i rho tau} on the pulse's own sample grid
  double sr = 0.0, si = 0.0;
  const auto& t = pulse_.times;
  const auto& f = pulse_.amplitudes;
  double c0 = std::cos(rho * t[0]), s0 = std::sin(rho * t[0]);
  for (size_t i = 1; i < t.size(); ++i) {
    const double c1 = std::cos(rho * t[i]);
    const double s1 = std::sin(rho * t[i]);
    const double w = 0.5 * (t[i] - t[i - 1]);
    sr += w * (f[i - 1] * c0 + f[i] * c1);
    si += w * (f[i - 1] * s0 + f[i] * s1);
    c0 = c1;
    s0 = s1;
  }
  *re = k_ * sr;
  *im = k_ * si;
}

double KickProfile::amplitude(double rho) const {
  switch (kind_) {
    case PulseShape::Kind::Delta:
      return k_;
    case PulseShape::Kind::Square:
      return K_ * sinc_pi(rho / rho_b_);
    case PulseShape::Kind::Sampled:
    default: {
      double re, im, a, p;
      exact_complex(rho, &re, &im);
      fold(re, im, &a, &p);
      return a;
    }
  }
}

double KickProfile::phase(double rho) const {
  if (kind_ != PulseShape::Kind::Sampled) return 0.0;
  double re, im, a, p;
  exact_complex(rho, &re, &im);
  fold(re, im, &a, &p);
  return p;
}

void KickProfile::interp_terms(double rho, double* amp, double* psi) const {
  const double x = std::fabs(rho);
  if (x > table_hi_ || tab_re_.empty()) {
    double re, im;
    exact_complex(rho, &re, &im);
    fold(re, im, amp, psi);
    return;
  }
  // interpolate the raw transform, then fold; Im is odd in rho
  const double u = x * table_inv_dx_;
  size_t i = static_cast<size_t>(u);
  if (i >= tab_re_.size() - 1) i = tab_re_.size() - 2;
  const double w = u - static_cast<double>(i);
  const double re = tab_re_[i] + w * (tab_re_[i + 1] - tab_re_[i]);
  double im = tab_im_[i] + w * (tab_im_[i + 1] - tab_im_[i]);
  if (rho < 0.0) im = -im;
  fold(re, im, amp, psi);
}

void KickProfile::build_table() {
  // Range 4x the first amplitude zero (or 4x the support's 2pi scale when
  // the transform never crosses zero). Map momenta beyond it take the exact
  // path in interp_terms.
  const double scale =
      std::isfinite(first_zero_) ? first_zero_ : two_pi / pulse_.support();
  table_hi_ = 4.0 * scale;
  const double dx = table_hi_ / static_cast<double>(kTableNodes - 1);
  table_inv_dx_ = 1.0 / dx;
  tab_re_.resize(kTableNodes);
  tab_im_.resize(kTableNodes);
  for (int i = 0; i < kTableNodes; ++i) {
    double re, im;
    exact_complex(static_cast<double>(i) * dx, &re, &im);
    tab_re_[i] = re;
    tab_im_[i] = im;
  }
}

KickProfile KickProfile::from_pulse(const PulseShape& pulse, double k) {
  pulse.validate();
  KickProfile p;
  p.pulse_ = pulse;
  p.kind_ = pulse.kind;
  p.k_ = k;
  p.K_ = k * pulse.area();
  switch (pulse.kind) {
    case PulseShape::Kind::Delta:
      p.rho_b_ = kInf;
      p.first_zero_ = kInf;
      p.peak_ = k;
      break;
    case PulseShape::Kind::Square:
      p.rho_b_ = two_pi / pulse.duty;
      p.first_zero_ = p.rho_b_;
      p.peak_ = p.K_;
      break;
    case PulseShape::Kind::Sampled:
      p.peak_ = p.amplitude(0.0);
      p.first_zero_ = find_first_zero(p);
      p.build_table();
      break;
  }
  return p;
}

KickProfile KickProfile::sinc(double K, double rho_b) {
  if (!(rho_b > 0.0)) throw std::domain_error("KickProfile::sinc: rho_b must be > 0");
  KickProfile p;
  p.kind_ = PulseShape::Kind::Square;
  p.K_ = K;
  p.k_ = K * rho_b / two_pi;  // the k of the equivalent square pulse
  p.rho_b_ = rho_b;
  p.first_zero_ = rho_b;
  p.peak_ = K;
  p.pulse_.kind = PulseShape::Kind::Square;
  p.pulse_.duty = two_pi / rho_b;
  return p;
}

KickProfile KickProfile::constant(double K) {
  KickProfile p;
  p.kind_ = PulseShape::Kind::Delta;
  p.k_ = K;
  p.K_ = K;
  p.peak_ = K;
  p.pulse_.kind = PulseShape::Kind::Delta;
  return p;
}

KickProfile keff_general(const PulseShape& pulse, double k) {
  return KickProfile::from_pulse(pulse, k);
}

double find_first_zero(const KickProfile& profile, double rho_max) {
  if (rho_max <= 0.0) {
    const double support = profile.pulse().support();
    rho_max = support > 0.0 ? 10.0 * two_pi / support : 1e4;
  }
  const int n_scan = 20000;
  const double dx = rho_max / static_cast<double>(n_scan);
  double a = dx;  // skip rho = 0 (peak, not a crossing)
  double fa = profile.amplitude(a);
  if (fa == 0.0) return a;
  for (int i = 2; i <= n_scan; ++i) {
    const double b = static_cast<double>(i) * dx;
    const double fb = profile.amplitude(b);
    if (fb == 0.0) return b;
    if ((fa > 0.0) != (fb > 0.0)) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        const double fm = profile.amplitude(mid);
        if (fm == 0.0) return mid;
        if ((flo > 0.0) != (fm > 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  return kInf;
}

}  // namespace rotor
