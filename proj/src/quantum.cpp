#include "rotor/quantum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rotor/rng.hpp"
#include "rotor/util.hpp"

namespace rotor {

namespace {

// FFTW planning is not thread-safe; plan once per grid size behind a mutex
// and afterwards run the (thread-safe) new-array execute on caller buffers.
// FFTW_UNALIGNED lifts the alignment requirement the plan would otherwise
// bake in, so std::vector storage is acceptable.
struct PlanPair {
  fftw_plan fwd = nullptr;  // momentum <- position, needs 1/M scaling
  fftw_plan bwd = nullptr;  // position <- momentum
};

PlanPair plans_for(int M) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> dummy(static_cast<size_t>(M));
  fftw_complex* d = reinterpret_cast<fftw_complex*>(dummy.data());
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.fwd = fftw_plan_dft_1d(M, d, d, FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_1d(M, d, d, FFTW_BACKWARD, flags);
  if (p.fwd == nullptr || p.bwd == nullptr)
    throw std::runtime_error("quantum: FFT planning failed for grid size " + std::to_string(M));
  cache.emplace(M, p);
  return p;
}

void to_position(WaveState& s, const PlanPair& p) {
  fftw_complex* d = reinterpret_cast<fftw_complex*>(s.c.data());
  fftw_execute_dft(p.bwd, d, d);
}

void to_momentum(WaveState& s, const PlanPair& p) {
  fftw_complex* d = reinterpret_cast<fftw_complex*>(s.c.data());
  fftw_execute_dft(p.fwd, d, d);
  const double inv = 1.0 / static_cast<double>(s.size());
  for (auto& a : s.c) a *= inv;
}

// exp(-i impulse * cos(phi_n) / hbar_eff) applied in the position
// representation; cosphi holds cos(2 pi n / M).
void apply_potential(WaveState& s, const std::vector<double>& cosphi, double impulse) {
  const double scale = impulse / s.hbar_eff;
  const int M = s.size();
  for (int n = 0; n < M; ++n) {
    const double theta = scale * cosphi[n];
    s.c[static_cast<size_t>(n)] *= std::complex<double>(std::cos(theta), -std::sin(theta));
  }
}

std::vector<double> cos_table(int M) {
  std::vector<double> t(static_cast<size_t>(M));
  for (int n = 0; n < M; ++n) t[static_cast<size_t>(n)] = std::cos(two_pi * n / M);
  return t;
}

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// Exact running integral of the piecewise-linear sampled envelope, evaluated
// at arbitrary tau; prefix holds the integral at each sample node.
double sampled_cumulative(const PulseShape& pulse, const std::vector<double>& prefix, double tau) {
  const auto& t = pulse.times;
  const auto& f = pulse.amplitudes;
  if (tau <= t.front()) return 0.0;
  if (tau >= t.back()) return prefix.back();
  const size_t hi = static_cast<size_t>(std::upper_bound(t.begin(), t.end(), tau) - t.begin());
  const size_t lo = hi - 1;
  const double dt = t[hi] - t[lo];
  const double x = tau - t[lo];
  const double slope = (f[hi] - f[lo]) / dt;
  return prefix[lo] + f[lo] * x + 0.5 * slope * x * x;
}

}  // namespace

double WaveState::norm() const {
  double s = 0.0;
  for (const auto& a : c) s += std::norm(a);
  return s;
}

double WaveState::mean_rho() const {
  const int M = size();
  double s = 0.0;
  for (int j = 0; j < M; ++j) s += std::norm(c[static_cast<size_t>(j)]) * rho(j);
  return s;
}

double WaveState::energy() const {
  const int M = size();
  double s = 0.0;
  for (int j = 0; j < M; ++j) {
    const double r = rho(j);
    s += std::norm(c[static_cast<size_t>(j)]) * r * r;
  }
  return 0.5 * s;
}

WaveState make_packet(int M, double hbar_eff, double center, double sigma_packet) {
  if (!power_of_two(M) || M < 64)
    throw std::invalid_argument("make_packet: grid size must be a power of two >= 64");
  if (!std::isfinite(hbar_eff) || hbar_eff <= 0.0)
    throw std::invalid_argument("make_packet: hbar_eff must be positive and finite");
  if (!std::isfinite(center)) throw std::invalid_argument("make_packet: center must be finite");
  if (!std::isfinite(sigma_packet) || sigma_packet < 0.0)
    throw std::invalid_argument("make_packet: sigma_packet must be >= 0");

  const double half_extent = 0.5 * M * hbar_eff;
  if (std::abs(center) + 6.0 * sigma_packet > half_extent)
    throw std::invalid_argument(
        "make_packet: packet does not fit on the momentum grid "
        "(|center| + 6 sigma exceeds the half-extent)");

  const double u = center / hbar_eff;
  const double mc = std::floor(u);
  WaveState s;
  s.beta = u - mc;
  if (s.beta >= 1.0) {  // guard against rounding at exact integers
    s.beta = 0.0;
  }
  s.hbar_eff = hbar_eff;
  s.c.assign(static_cast<size_t>(M), std::complex<double>(0.0, 0.0));

  const long mci = static_cast<long>(u - s.beta);
  if (mci < -M / 2 || mci >= M / 2)
    throw std::invalid_argument("make_packet: center momentum index outside the grid");

  if (sigma_packet == 0.0) {
    const int j = mci >= 0 ? static_cast<int>(mci) : static_cast<int>(mci) + M;
    s.c[static_cast<size_t>(j)] = 1.0;
    return s;
  }

  const double inv4s2 = 1.0 / (4.0 * sigma_packet * sigma_packet);
  double nrm = 0.0;
  for (int j = 0; j < M; ++j) {
    const double d = s.rho(j) - center;
    const double a = std::exp(-d * d * inv4s2);
    s.c[static_cast<size_t>(j)] = a;
    nrm += a * a;
  }
  const double inv = 1.0 / std::sqrt(nrm);
  for (auto& a : s.c) a *= inv;
  return s;
}

void kick_delta(WaveState& s, double k) {
  if (!std::isfinite(k)) throw std::invalid_argument("kick_delta: k must be finite");
  if (k == 0.0) return;
  const int M = s.size();
  if (!power_of_two(M)) throw std::invalid_argument("kick_delta: grid size must be a power of two");
  const PlanPair p = plans_for(M);
  const std::vector<double> cosphi = cos_table(M);
  to_position(s, p);
  apply_potential(s, cosphi, k);
  to_momentum(s, p);
}

void free_evolve(WaveState& s, double duration) {
  if (!std::isfinite(duration)) throw std::invalid_argument("free_evolve: duration must be finite");
  if (duration == 0.0) return;
  const int M = s.size();
  const double scale = duration / (2.0 * s.hbar_eff);
  for (int j = 0; j < M; ++j) {
    const double r = s.rho(j);
    const double theta = scale * r * r;
    s.c[static_cast<size_t>(j)] *= std::complex<double>(std::cos(theta), -std::sin(theta));
  }
}

int default_substeps(double pulse_support, double rho_grid_max) {
  const double needed = 4.0 * pulse_support * std::abs(rho_grid_max) / pi;
  int n = 16;
  if (needed > n && std::isfinite(needed)) n = static_cast<int>(std::ceil(needed));
  return n;
}

void kick_finite(WaveState& s, const PulseShape& pulse, double k, int substeps) {
  pulse.validate();
  if (!std::isfinite(k)) throw std::invalid_argument("kick_finite: k must be finite");
  if (pulse.kind == PulseShape::Kind::Delta) {
    kick_delta(s, k);
    return;
  }
  if (substeps < 1) throw std::invalid_argument("kick_finite: substeps must be >= 1");
  const int M = s.size();
  if (!power_of_two(M)) throw std::invalid_argument("kick_finite: grid size must be a power of two");

  // Pulse-local time window and the exact envelope integral per substep.
  double t0, t1;
  std::vector<double> area(static_cast<size_t>(substeps));
  if (pulse.kind == PulseShape::Kind::Square) {
    t0 = -0.5 * pulse.duty;
    t1 = 0.5 * pulse.duty;
    const double each = pulse.duty / substeps;
    std::fill(area.begin(), area.end(), each);
  } else {
    t0 = pulse.times.front();
    t1 = pulse.times.back();
    std::vector<double> prefix(pulse.times.size(), 0.0);
    for (size_t i = 0; i + 1 < pulse.times.size(); ++i) {
      const double dt = pulse.times[i + 1] - pulse.times[i];
      prefix[i + 1] = prefix[i] + 0.5 * (pulse.amplitudes[i] + pulse.amplitudes[i + 1]) * dt;
    }
    const double width = t1 - t0;
    double prev = 0.0;
    for (int j = 0; j < substeps; ++j) {
      const double tb = j + 1 == substeps ? t1 : t0 + width * (j + 1) / substeps;
      const double cum = sampled_cumulative(pulse, prefix, tb);
      area[static_cast<size_t>(j)] = cum - prev;
      prev = cum;
    }
  }
  const double dt = (t1 - t0) / substeps;

  const PlanPair p = plans_for(M);
  const std::vector<double> cosphi = cos_table(M);

  // Strang splitting: half kinetic step, potential impulse, half kinetic
  // step per substep; adjacent half steps merge into full ones.
  free_evolve(s, 0.5 * dt);
  for (int j = 0; j < substeps; ++j) {
    to_position(s, p);
    apply_potential(s, cosphi, k * area[static_cast<size_t>(j)]);
    to_momentum(s, p);
    free_evolve(s, j + 1 == substeps ? 0.5 * dt : dt);
  }
}

void validate(const QuantumConfig& cfg) {
  if (!power_of_two(cfg.grid_size) || cfg.grid_size < 64)
    throw std::invalid_argument("quantum: grid_size must be a power of two >= 64");
  if (!std::isfinite(cfg.hbar_eff) || cfg.hbar_eff <= 0.0)
    throw std::invalid_argument("quantum: hbar_eff must be positive and finite");
  if (!std::isfinite(cfg.k) || cfg.k < 0.0)
    throw std::invalid_argument("quantum: k must be finite and >= 0");
  if (cfg.n_kicks < 0) throw std::invalid_argument("quantum: n_kicks must be >= 0");
  if (cfg.n_beta < 1) throw std::invalid_argument("quantum: n_beta must be >= 1");
  if (!std::isfinite(cfg.sigma_rho) || cfg.sigma_rho < 0.0)
    throw std::invalid_argument("quantum: sigma_rho must be >= 0");
  if (!std::isfinite(cfg.rho_L)) throw std::invalid_argument("quantum: rho_L must be finite");
  if (cfg.substeps < 0) throw std::invalid_argument("quantum: substeps must be >= 0");
  if (!std::isfinite(cfg.sigma_packet) && !(cfg.sigma_packet < 0.0))
    throw std::invalid_argument("quantum: sigma_packet must be >= 0 (or < 0 for the default)");
  cfg.pulse.validate();

  const double half_extent = 0.5 * cfg.grid_size * cfg.hbar_eff;
  const double K = cfg.k * cfg.pulse.area();
  const double sp = cfg.sigma_packet < 0.0 ? cfg.hbar_eff : cfg.sigma_packet;

  // Localization-length scale of the dynamics plus the initial cloud.
  double reach = std::abs(cfg.rho_L) + 0.5 * K * K / cfg.hbar_eff;
  const double support = cfg.pulse.support();
  if (support > 0.0) {
    const double rho_b = two_pi / support;  // first kick-amplitude zero
    reach = std::max(reach, rho_b);
  }
  if (4.0 * reach > half_extent)
    throw std::invalid_argument(
        "quantum: momentum grid too small: half-extent (grid_size/2 * hbar_eff) must be at "
        "least 4x the dynamical reach (|rho_L| + K^2/(2 hbar_eff), and the kick-amplitude "
        "zero for finite pulses)");
  if (std::abs(cfg.rho_L) + 6.0 * cfg.sigma_rho + 6.0 * sp > half_extent)
    throw std::invalid_argument("quantum: initial cloud does not fit on the momentum grid");
}

QuantumSeries run_quantum(const QuantumConfig& cfg) {
  validate(cfg);
  const int M = cfg.grid_size;
  const int nb = cfg.n_beta;
  const int nk = cfg.n_kicks;
  const double sp = cfg.sigma_packet < 0.0 ? cfg.hbar_eff : cfg.sigma_packet;
  const double support = cfg.pulse.support();
  const double free_frac = 1.0 - support;
  const bool delta = cfg.pulse.kind == PulseShape::Kind::Delta;
  const double rho_grid_max = 0.5 * M * cfg.hbar_eff;
  const int substeps =
      cfg.substeps > 0 ? cfg.substeps : default_substeps(support, rho_grid_max);

  // Draw packet centers and build the initial states serially so any
  // construction error surfaces before the parallel region.
  std::vector<WaveState> packets;
  packets.reserve(static_cast<size_t>(nb));
  for (int i = 0; i < nb; ++i) {
    Rng rng = Rng::stream(cfg.seed, static_cast<uint64_t>(i));
    const double center = cfg.rho_L + cfg.sigma_rho * rng.next_gauss();
    packets.push_back(make_packet(M, cfg.hbar_eff, center, sp));
  }
  plans_for(M);  // plan once, outside the parallel region

  const size_t rows = static_cast<size_t>(nk) + 1;
  std::vector<double> mean_all(static_cast<size_t>(nb) * rows);
  std::vector<double> energy_all(static_cast<size_t>(nb) * rows);
  std::vector<double> drift(static_cast<size_t>(nb), 0.0);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < nb; ++i) {
    WaveState& ws = packets[static_cast<size_t>(i)];
    double* mrow = &mean_all[static_cast<size_t>(i) * rows];
    double* erow = &energy_all[static_cast<size_t>(i) * rows];
    mrow[0] = ws.mean_rho();
    erow[0] = ws.energy();
    for (int t = 1; t <= nk; ++t) {
      if (delta)
        kick_delta(ws, cfg.k);
      else
        kick_finite(ws, cfg.pulse, cfg.k, substeps);
      free_evolve(ws, free_frac);
      mrow[static_cast<size_t>(t)] = ws.mean_rho();
      erow[static_cast<size_t>(t)] = ws.energy();
    }
    drift[static_cast<size_t>(i)] = std::abs(ws.norm() - 1.0);
  }

  QuantumSeries out;
  out.n_beta = nb;
  out.kicks.resize(rows);
  out.mean_rho.assign(rows, 0.0);
  out.energy.assign(rows, 0.0);
  for (size_t t = 0; t < rows; ++t) out.kicks[t] = static_cast<int>(t);
  // Fixed-order serial reduction keeps results identical across thread counts.
  for (int i = 0; i < nb; ++i) {
    for (size_t t = 0; t < rows; ++t) {
      out.mean_rho[t] += mean_all[static_cast<size_t>(i) * rows + t];
      out.energy[t] += energy_all[static_cast<size_t>(i) * rows + t];
    }
  }
  const double inv = 1.0 / nb;
  for (size_t t = 0; t < rows; ++t) {
    out.mean_rho[t] *= inv;
    out.energy[t] *= inv;
  }
  for (int i = 0; i < nb; ++i) out.norm_drift = std::max(out.norm_drift, drift[static_cast<size_t>(i)]);
  return out;
}

double break_time_estimate(double K, double hbar_eff) {
  if (!std::isfinite(K) || !std::isfinite(hbar_eff) || hbar_eff <= 0.0)
    throw std::invalid_argument("break_time_estimate: K finite and hbar_eff > 0 required");
  const double r = K / hbar_eff;
  return 0.5 * r * r;
}

}  // namespace rotor
