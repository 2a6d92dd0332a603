#include "rotor/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rotor/rng.hpp"
#include "rotor/util.hpp"

namespace rotor {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const EnsembleConfig& cfg) {
  if (cfg.n_atoms < 1) throw std::invalid_argument("EnsembleConfig: n_atoms must be >= 1");
  if (!(cfg.sigma_rho >= 0.0)) throw std::invalid_argument("EnsembleConfig: sigma_rho must be >= 0");
  if (cfg.n_kicks < 0) throw std::invalid_argument("EnsembleConfig: n_kicks must be >= 0");
  if (!std::isfinite(cfg.rho_L)) throw std::invalid_argument("EnsembleConfig: rho_L must be finite");
}
}  // namespace

std::vector<PhaseState> sample_initial(const EnsembleConfig& cfg) {
  validate(cfg);
  std::vector<PhaseState> states(static_cast<size_t>(cfg.n_atoms));
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < cfg.n_atoms; ++i) {
    Rng rng = Rng::stream(cfg.seed, static_cast<uint64_t>(i));
    const double phi = rng.next_angle();
    const double rho = cfg.rho_L + cfg.sigma_rho * rng.next_gauss();
    states[static_cast<size_t>(i)] = {phi, rho};
  }
  return states;
}

void evolve_ensemble(std::vector<PhaseState>& states, const KickProfile& profile,
                     int n_kicks, int record_every,
                     const std::function<void(int, const std::vector<PhaseState>&)>& observer) {
  if (n_kicks < 0) throw std::invalid_argument("evolve_ensemble: n_kicks must be >= 0");
  if (observer) observer(0, states);
  const int stride = record_every > 0 ? record_every : n_kicks;
  int kick = 0;
  while (kick < n_kicks) {
    const int seg = std::min(stride == 0 ? n_kicks : stride, n_kicks - kick);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(states.size()); ++i) {
      PhaseState s = states[static_cast<size_t>(i)];
      for (int j = 0; j < seg; ++j) s = step(s, profile);
      states[static_cast<size_t>(i)] = s;
    }
    kick += seg;
    if (observer) observer(kick, states);
  }
}

MomentumHistogram histogram(const std::vector<PhaseState>& states, double bin_width,
                            double lo, double hi) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin_width must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("histogram: requires lo < hi");
  const int n_bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / bin_width - 1e-12)));
  MomentumHistogram h;
  h.bin_edges.resize(static_cast<size_t>(n_bins) + 3);
  h.bin_edges.front() = -kInf;
  for (int i = 0; i <= n_bins; ++i) h.bin_edges[static_cast<size_t>(i) + 1] = lo + i * bin_width;
  h.bin_edges.back() = kInf;
  h.counts.assign(static_cast<size_t>(n_bins) + 2, 0.0);
  for (const auto& s : states) {
    // half-open interior bins [edge, edge+w); outer bins catch the rest
    int idx;
    if (s.rho < lo) {
      idx = 0;
    } else {
      const int b = static_cast<int>(std::floor((s.rho - lo) / bin_width));
      idx = b >= n_bins ? n_bins + 1 : b + 1;
    }
    h.counts[static_cast<size_t>(idx)] += 1.0;
  }
  return h;
}

Moments moments(const std::vector<PhaseState>& states, double rho_L) {
  if (states.empty()) throw std::invalid_argument("moments: empty ensemble");
  const double n = static_cast<double>(states.size());
  double sum = 0.0;
  for (const auto& s : states) sum += s.rho;
  const double mean = sum / n;
  double ss = 0.0, sq = 0.0;
  for (const auto& s : states) {
    const double d = s.rho - mean;
    ss += d * d;
    sq += s.rho * s.rho;
  }
  return {mean, ss / n, 0.5 * sq / n, mean - rho_L};
}

Moments moments(const MomentumHistogram& hist, double rho_L) {
  double w = 0.0, sum = 0.0, sq = 0.0;
  for (size_t i = 1; i + 1 < hist.bin_edges.size() - 1; ++i) {
    const double c = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
    const double cnt = hist.counts[i];
    w += cnt;
    sum += cnt * c;
    sq += cnt * c * c;
  }
  if (w == 0.0) throw std::invalid_argument("moments: histogram has no interior weight");
  const double mean = sum / w;
  const double var = sq / w - mean * mean;
  return {mean, var, 0.5 * sq / w, mean - rho_L};
}

EnsembleSeries run_ensemble(const EnsembleConfig& cfg, const KickProfile& profile,
                            int record_every) {
  std::vector<PhaseState> states = sample_initial(cfg);
  std::vector<double> rho0(states.size());
  for (size_t i = 0; i < states.size(); ++i) rho0[i] = states[i].rho;

  EnsembleSeries series;
  auto observer = [&](int kick, const std::vector<PhaseState>& st) {
    series.kicks.push_back(kick);
    series.moments.push_back(moments(st, cfg.rho_L));
    double disp = 0.0;
    for (size_t i = 0; i < st.size(); ++i) {
      const double d = st[i].rho - rho0[i];
      disp += d * d;
    }
    series.disp_energy.push_back(0.5 * disp / static_cast<double>(st.size()));
  };
  evolve_ensemble(states, profile, cfg.n_kicks, record_every, observer);
  return series;
}

std::vector<SweepPoint> asymmetry_sweep(const std::vector<double>& rho_L_values,
                                        const EnsembleConfig& cfg_template,
                                        const KickProfile& profile) {
  std::vector<SweepPoint> out;
  out.reserve(rho_L_values.size());
  for (size_t i = 0; i < rho_L_values.size(); ++i) {
    EnsembleConfig cfg = cfg_template;
    cfg.rho_L = rho_L_values[i];
    cfg.seed = Rng::sub_seed(cfg_template.seed, i);
    std::vector<PhaseState> states = sample_initial(cfg);
    evolve_ensemble(states, profile, cfg.n_kicks, 0, nullptr);
    const Moments m = moments(states, cfg.rho_L);
    out.push_back({cfg.rho_L, m.mean, m.asymmetry, m.energy, cfg.n_atoms, cfg.seed,
                   std::sqrt(m.variance / static_cast<double>(cfg.n_atoms))});
  }
  return out;
}

double diffusion_coefficient(const std::vector<std::pair<int, double>>& series,
                             int window_lo, int window_hi) {
  std::vector<double> x, y;
  for (const auto& [kick, value] : series) {
    if (kick >= window_lo && kick <= window_hi) {
      x.push_back(static_cast<double>(kick));
      y.push_back(value);
    }
  }
  if (x.size() < 3) throw std::invalid_argument("diffusion_coefficient: fewer than 3 points in window");
  return linear_fit(x, y).slope;
}

}  // namespace rotor
