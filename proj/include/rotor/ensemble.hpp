#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rotor/classmap.hpp"
#include "rotor/pulses.hpp"

namespace rotor {

struct EnsembleConfig {
  int64_t n_atoms = 100000;
  double sigma_rho = 4.0;   // rms initial momentum width
  double rho_L = 0.0;       // mean initial momentum (lattice frame)
  int n_kicks = 120;
  uint64_t seed = 1;
};

struct Moments {
  double mean;       // <rho>
  double variance;
  double energy;     // <rho^2>/2
  double asymmetry;  // <rho> - rho_L
};

// Uniform interior bins plus an underflow and an overflow bin carried as the
// first/last counts with infinite outer edges, so total weight always equals
// the atom count.
struct MomentumHistogram {
  std::vector<double> bin_edges;  // -inf, lo, lo+w, ..., hi', +inf
  std::vector<double> counts;     // bin_edges.size() - 1 entries
};

// n_atoms states with rho ~ Normal(rho_L, sigma_rho^2), phi ~ Uniform[0,2pi),
// atom i drawn from the dedicated stream (seed, i): the sample is a pure
// function of the config, independent of threading or call order.
std::vector<PhaseState> sample_initial(const EnsembleConfig& cfg);

// Advance every atom by n_kicks applications of step, invoking observer at
// kick 0, every record_every kicks, and the final kick. record_every <= 0
// records endpoints only. Atoms advance in parallel; observers run serially.
void evolve_ensemble(std::vector<PhaseState>& states, const KickProfile& profile,
                     int n_kicks, int record_every,
                     const std::function<void(int, const std::vector<PhaseState>&)>& observer);

MomentumHistogram histogram(const std::vector<PhaseState>& states, double bin_width,
                            double lo, double hi);

// Raw-state moments (exact).
Moments moments(const std::vector<PhaseState>& states, double rho_L);

// Histogram moments from interior bin centers; approximate by construction
// (overflow weight is excluded from the normalization).
Moments moments(const MomentumHistogram& hist, double rho_L);

// Per-snapshot statistics of one ensemble run. disp_energy is
// <(rho - rho_0)^2>/2, the mean-square displacement form whose slope against
// kick number is the diffusion coefficient.
struct EnsembleSeries {
  std::vector<int> kicks;
  std::vector<Moments> moments;
  std::vector<double> disp_energy;
};

EnsembleSeries run_ensemble(const EnsembleConfig& cfg, const KickProfile& profile,
                            int record_every = 1);

struct SweepPoint {
  double rho_L;
  double mean;
  double asymmetry;
  double energy;
  int64_t n_atoms;
  uint64_t seed;
  double stderr_mean;  // sqrt(variance / n_atoms), the 1-sigma error of mean
};

// One full ensemble per rho_L value; point i runs under the deterministic
// sub-seed derived from (template seed, i).
std::vector<SweepPoint> asymmetry_sweep(const std::vector<double>& rho_L_values,
                                        const EnsembleConfig& cfg_template,
                                        const KickProfile& profile);

// Least-squares slope of an energy-like series over kicks in
// [window_lo, window_hi]. Feeding <(rho-rho_0)^2>/2 per kick yields D.
// Throws std::invalid_argument on fewer than 3 usable points or a
// single-abscissa window.
double diffusion_coefficient(const std::vector<std::pair<int, double>>& series,
                             int window_lo = 5, int window_hi = 1 << 30);

}  // namespace rotor
