#include "rotor/classmap.hpp"

#include <stdexcept>

namespace rotor {

Trajectory iterate(PhaseState s0, const KickProfile& profile, int n_kicks) {
  if (n_kicks < 0) throw std::invalid_argument("iterate: n_kicks must be >= 0");
  Trajectory t;
  t.reserve(static_cast<size_t>(n_kicks) + 1);
  t.push_back(s0);
  PhaseState s = s0;
  for (int n = 0; n < n_kicks; ++n) {
    s = step(s, profile);
    t.push_back(s);
  }
  return t;
}

PhaseState iterate_final(PhaseState s0, const KickProfile& profile, int n_kicks) {
  if (n_kicks < 0) throw std::invalid_argument("iterate_final: n_kicks must be >= 0");
  PhaseState s = s0;
  for (int n = 0; n < n_kicks; ++n) s = step(s, profile);
  return s;
}

std::vector<SectionPoint> poincare_section(const std::vector<PhaseState>& initials,
                                           const KickProfile& profile, int n_kicks) {
  if (initials.empty()) throw std::invalid_argument("poincare_section: no initial conditions");
  if (n_kicks < 0) throw std::invalid_argument("poincare_section: n_kicks must be >= 0");
  const size_t per = static_cast<size_t>(n_kicks) + 1;
  std::vector<SectionPoint> out(initials.size() * per);
#pragma omp parallel for schedule(static)
  for (long long ti = 0; ti < static_cast<long long>(initials.size()); ++ti) {
    PhaseState s = initials[static_cast<size_t>(ti)];
    SectionPoint* slot = &out[static_cast<size_t>(ti) * per];
    for (int n = 0; n <= n_kicks; ++n) {
      slot[n] = {static_cast<int>(ti), n, s.phi, s.rho};
      if (n < n_kicks) s = step(s, profile);
    }
  }
  return out;
}

}  // namespace rotor
