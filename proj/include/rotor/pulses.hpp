#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rotor/util.hpp"

namespace rotor {

// Kick envelope f(tau) over one period (tau in kick-period units).
struct PulseShape {
  enum class Kind { Delta, Square, Sampled };

  Kind kind = Kind::Delta;
  double duty = 0.0;                // Square: width eta, centered on tau = 0
  std::vector<double> times;        // Sampled: strictly increasing, |tau| < 0.5
  std::vector<double> amplitudes;   // Sampled: f at each time

  static PulseShape delta() { return PulseShape{}; }

  static PulseShape square(double eta) {
    PulseShape p;
    p.kind = Kind::Square;
    p.duty = eta;
    p.validate();
    return p;
  }

  static PulseShape sampled(std::vector<double> t, std::vector<double> f) {
    PulseShape p;
    p.kind = Kind::Sampled;
    p.times = std::move(t);
    p.amplitudes = std::move(f);
    p.validate();
    return p;
  }

  void validate() const;

  // integral of f(tau): 1 for Delta (unit impulse), eta for Square,
  // trapezoid for Sampled
  double area() const;

  // support width: 0 / eta / times.back() - times.front()
  double support() const;
};

// Momentum-dependent effective kick induced by a pulse of finite width.
// The complex transform C(rho) = k * integral f(tau) exp(i rho tau) dtau is
// folded into a SIGNED amplitude A and a residual phase psi in (-pi/2, pi/2]:
// the map applies rho' = rho + A(rho) sin(phi' + psi(rho)). Time-symmetric
// pulses have a real transform, so psi is identically 0 and A carries the
// sign (negative between zeros of the transform); for a square pulse A is
// exactly K sin(pi rho/rho_b)/(pi rho/rho_b) with K = k*eta, rho_b = 2pi/eta.
class KickProfile {
 public:
  // Exact signed amplitude: closed form for Delta/Square, direct trapezoid
  // quadrature of the sampled envelope at the requested rho otherwise.
  double amplitude(double rho) const;

  // Exact residual kick phase, 0 for Delta/Square.
  double phase(double rho) const;

  // Hot-path amplitude/phase: closed form for Delta/Square; a linearly
  // interpolated table (built eagerly at construction) for Sampled, falling
  // back to exact quadrature outside the table range. Table error stays
  // below 1e-4 * |peak|.
  void kick_terms(double rho, double* amp, double* psi) const {
    switch (kind_) {
      case PulseShape::Kind::Delta:
        *amp = k_;
        *psi = 0.0;
        return;
      case PulseShape::Kind::Square:
        *amp = K_ * sinc_pi(rho / rho_b_);
        *psi = 0.0;
        return;
      case PulseShape::Kind::Sampled:
      default:
        interp_terms(rho, amp, psi);
        return;
    }
  }

  double peak() const { return peak_; }              // amplitude(0)
  double first_zero() const { return first_zero_; }  // +inf when none
  double stochasticity() const { return K_; }        // k * pulse area
  double kick_scale() const { return k_; }
  PulseShape::Kind kind() const { return kind_; }
  const PulseShape& pulse() const { return pulse_; }

  // Profile of a pulse envelope with kick scale k.
  static KickProfile from_pulse(const PulseShape& pulse, double k);

  // Square-pulse profile pinned directly by (K, rho_b): equivalent to
  // from_pulse(square(2pi/rho_b), K*rho_b/(2pi)) without requiring
  // rho_b > 2pi. Requires rho_b > 0.
  static KickProfile sinc(double K, double rho_b);

  // Momentum-independent kick of strength K (Delta profile).
  static KickProfile constant(double K);

 private:
  KickProfile() = default;
  void build_table();
  void interp_terms(double rho, double* amp, double* psi) const;
  void exact_complex(double rho, double* re, double* im) const;

  PulseShape pulse_;
  PulseShape::Kind kind_ = PulseShape::Kind::Delta;
  double k_ = 0.0;        // kick scale multiplying the transform
  double K_ = 0.0;        // k * area
  double rho_b_ = std::numeric_limits<double>::infinity();
  double peak_ = 0.0;
  double first_zero_ = std::numeric_limits<double>::infinity();

  // Sampled-pulse memo table over [-table_hi_, table_hi_]: raw Re/Im of the
  // transform (smooth where the folded pair is not), folded after
  // interpolation.
  std::vector<double> tab_re_, tab_im_;
  double table_hi_ = 0.0;
  double table_inv_dx_ = 0.0;
};

// K sin(pi rho/rho_b)/(pi rho/rho_b), the rho = 0 limit evaluated as K and
// the zeros at integer multiples of rho_b exact in floating point.
// Throws std::domain_error when rho_b <= 0.
inline double keff_square(double rho, double K, double rho_b) {
  if (!(rho_b > 0.0)) throw std::domain_error("keff_square: rho_b must be > 0");
  return K * sinc_pi(rho / rho_b);
}

// Profile of a validated pulse shape; see KickProfile.
KickProfile keff_general(const PulseShape& pulse, double k);

// Smallest rho > 0 where the signed amplitude crosses zero: sign-change scan
// then bisection to 1e-9 absolute. Returns +inf when no crossing exists
// below rho_max. rho_max <= 0 selects the default scan range
// (10 * 2pi/support, or 1e4 for zero-width pulses).
double find_first_zero(const KickProfile& profile, double rho_max = 0.0);

}  // namespace rotor
