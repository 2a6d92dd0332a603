#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rotor/pulses.hpp"

namespace rotor {

// Wavefunction over the momentum grid rho_m = (m + beta) * hbar_eff in FFT
// index order: c[j] holds m = j for j < M/2 and m = j - M otherwise. The
// quasimomentum beta is conserved by both the kinetic phase and the cos(phi)
// coupling, so one WaveState stays inside a single beta sector.
struct WaveState {
  std::vector<std::complex<double>> c;
  double beta = 0.0;      // in [0, 1)
  double hbar_eff = 1.0;

  int size() const { return static_cast<int>(c.size()); }

  double rho(int j) const {
    const int M = size();
    const int m = j < M / 2 ? j : j - M;
    return (static_cast<double>(m) + beta) * hbar_eff;
  }

  double norm() const;      // sum |c|^2
  double mean_rho() const;  // momentum-population mean
  double energy() const;    // <rho^2>/2
};

// Gaussian momentum packet exp(-(rho - center)^2 / (4 sigma_packet^2)) on the
// grid whose beta = frac(center/hbar_eff), normalized; sigma_packet = 0
// selects the single momentum eigenstate at center. M must be a power of two,
// M >= 64, and the packet must fit: |center| + 6 sigma_packet within the grid
// half-extent (M/2) hbar_eff. Violations throw std::invalid_argument.
WaveState make_packet(int M, double hbar_eff, double center, double sigma_packet);

// One zero-width kick: multiply exp(-i k cos(phi) / hbar_eff) in the position
// representation (unitary; momentum transfers in integer steps of hbar_eff).
void kick_delta(WaveState& s, double k);

// Free flight: c_m *= exp(-i rho_m^2 duration / (2 hbar_eff)). Diagonal in
// momentum; populations exactly preserved.
void free_evolve(WaveState& s, double duration);

// Finite-width kick by Strang splitting over the pulse support: half-step
// kinetic, full potential phase, half-step kinetic per substep. The potential
// phase of substep j uses the exact integral of the (piecewise-linear)
// envelope over that substep, so the summed potential area equals the pulse
// area regardless of substeps. Delta pulses delegate to kick_delta.
void kick_finite(WaveState& s, const PulseShape& pulse, double k, int substeps);

// substeps >= 16, growing with eta * rho_max so the free rotation per substep
// stays below a quarter turn at the grid edge.
int default_substeps(double pulse_support, double rho_grid_max);

struct QuantumConfig {
  int grid_size = 2048;       // M, power of two >= 64
  double hbar_eff = 1.0;
  double k = 5.0;             // kick scale; classical stochasticity K = k * pulse area
  PulseShape pulse = PulseShape::delta();
  int n_kicks = 500;
  int n_beta = 16;            // incoherent initial-condition samples
  double sigma_rho = 4.0;     // cloud momentum width (packet centers)
  double rho_L = 0.0;         // cloud center (lattice frame)
  double sigma_packet = -1.0; // per-packet width; < 0 selects hbar_eff, 0 an eigenstate
  int substeps = 0;           // 0 = default_substeps
  uint64_t seed = 1;
};

// Throws std::invalid_argument unless the grid half-extent (M/2) hbar_eff
// covers 4x both the finite kick-amplitude zero rho_b and |rho_L| plus the
// localization-length scale K^2/(2 hbar_eff), and the initial cloud fits.
void validate(const QuantumConfig& cfg);

struct QuantumSeries {
  std::vector<int> kicks;        // 0..n_kicks
  std::vector<double> mean_rho;  // incoherent average over packets
  std::vector<double> energy;    // incoherent average of <rho^2>/2
  double norm_drift = 0.0;       // max |norm - 1| across packets, end of run
  int n_beta = 0;
};

// Evolve n_beta packets, each centered at a Normal(rho_L, sigma_rho^2) draw
// from stream (seed, packet index) with beta = frac(center/hbar_eff); kick
// then free flight of the remaining period fraction, per kick. Packet i is
// independent of every other, so packets run in parallel; averages reduce in
// fixed index order.
QuantumSeries run_quantum(const QuantumConfig& cfg);

// t* = (K / hbar_eff)^2 / 2 kicks: the constant 1/2 is a fixed convention,
// the scaling in K and hbar_eff the meaningful content.
double break_time_estimate(double K, double hbar_eff);

}  // namespace rotor
