// pulsed-rotor: command-line front end for the kicked-rotor library.
//
// Every subcommand writes its CSV outputs plus a manifest.json (command,
// seed, resolved parameters, file digests) into --out. Outputs are written
// atomically and are byte-identical for identical invocations with the same
// seed, independent of thread count.

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rotor/classmap.hpp"
#include "rotor/ensemble.hpp"
#include "rotor/io.hpp"
#include "rotor/pulses.hpp"
#include "rotor/quantum.hpp"
#include "rotor/units.hpp"
#include "rotor/util.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Value parsing: angle literals ("13.5pi", "-pi", "0.5") and inclusive ranges
// ("start:stop:step", each part an angle literal) or comma lists.

double parse_angle(std::string s) {
  const auto issp = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty numeric value");
  double mult = 1.0;
  if (s.size() >= 2 && (s.compare(s.size() - 2, 2, "pi") == 0 || s.compare(s.size() - 2, 2, "PI") == 0)) {
    mult = rotor::pi;
    s.erase(s.size() - 2);
    if (s.empty() || s == "-" || s == "+") s += "1";
  }
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("trailing characters in number: '" + s + "'");
  return v * mult;
}

std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3)
      throw std::invalid_argument("range must be start:stop:step, got '" + spec + "'");
    const double start = parse_angle(parts[0]);
    const double stop = parse_angle(parts[1]);
    const double step = parse_angle(parts[2]);
    if (step == 0.0 || (stop - start) * step < 0.0)
      throw std::invalid_argument("range step does not reach stop: '" + spec + "'");
    const double eps = std::abs(step) * 1e-9;
    for (double v = start; (step > 0.0) ? v <= stop + eps : v >= stop - eps; v += step)
      out.push_back(v);
    return out;
  }
  std::stringstream ss(spec);
  std::string p;
  while (std::getline(ss, p, ',')) out.push_back(parse_angle(p));
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

std::string grid_spec_error(const std::string& s) {
  return "grid must be COLSxROWS (e.g. 24x24), got '" + s + "'";
}

std::pair<int, int> parse_grid(const std::string& s) {
  int a = 0, b = 0;
  char x = 0;
  std::istringstream in(s);
  if (!(in >> a >> x >> b) || (x != 'x' && x != 'X') || !(in >> std::ws).eof())
    throw std::invalid_argument(grid_spec_error(s));
  if (a < 1 || b < 1) throw std::invalid_argument(grid_spec_error(s));
  return {a, b};
}

// ---------------------------------------------------------------------------
// Config file support: a JSON object whose keys are long option names without
// the leading dashes. Command-line flags override config values.

json load_config(const std::string& path) {
  if (path.empty()) return json();
  json j;
  try {
    j = json::parse(rotor::io::read_file(path));
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  return j;
}

void check_known(const json& cfg, std::initializer_list<const char*> keys) {
  if (!cfg.is_object()) return;
  for (const auto& item : cfg.items()) {
    bool known = false;
    for (const char* k : keys)
      if (item.key() == k) known = true;
    if (!known) throw std::invalid_argument("config: unknown key '" + item.key() + "'");
  }
}

bool cfg_has(const json& cfg, const char* key, const CLI::Option* opt) {
  return cfg.is_object() && cfg.contains(key) && (opt == nullptr || opt->count() == 0);
}

template <class T>
void merge_num(const json& cfg, const char* key, const CLI::Option* opt, T* v) {
  if (!cfg_has(cfg, key, opt)) return;
  try {
    *v = cfg.at(key).get<T>();
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("config: bad value for '") + key + "'");
  }
}

// For options that accept angle literals: config value may be a number or a
// string; normalize to the string form the CLI would have received.
void merge_valstr(const json& cfg, const char* key, const CLI::Option* opt, std::string* v) {
  if (!cfg_has(cfg, key, opt)) return;
  const json& j = cfg.at(key);
  if (j.is_string())
    *v = j.get<std::string>();
  else if (j.is_number())
    *v = rotor::io::format_g17(j.get<double>());
  else
    throw std::invalid_argument(std::string("config: bad value for '") + key + "'");
}

void merge_str(const json& cfg, const char* key, const CLI::Option* opt, std::string* v) {
  if (!cfg_has(cfg, key, opt)) return;
  if (!cfg.at(key).is_string())
    throw std::invalid_argument(std::string("config: bad value for '") + key + "'");
  *v = cfg.at(key).get<std::string>();
}

// ---------------------------------------------------------------------------
// Output plumbing.

struct Common {
  std::string out;
  std::string config_path;
  uint64_t seed = 1;
  json cfg;  // loaded config contents, embedded in the manifest
};

void add_common(CLI::App* cmd, const std::shared_ptr<Common>& c) {
  const char* env = std::getenv("PULSED_ROTOR_OUTDIR");
  c->out = env != nullptr && env[0] != '\0' ? env : ".";
  cmd->add_option("--out", c->out, "Output directory (default: $PULSED_ROTOR_OUTDIR or .)")
      ->capture_default_str();
  cmd->add_option("--config", c->config_path,
                  "JSON config file; keys are long option names, flags override");
  cmd->add_option("--seed", c->seed, "Random seed")->capture_default_str();
}

void emit(const Common& c, const std::string& command, ordered_json params,
          const std::vector<std::pair<std::string, std::string>>& outputs) {
  namespace fs = std::filesystem;
  fs::create_directories(c.out);
  params["config_file"] = c.config_path.empty() ? ordered_json(nullptr) : ordered_json(c.config_path);
  if (!c.cfg.is_null()) params["config"] = c.cfg;  // flags override, but both are recorded
  for (const auto& [name, content] : outputs)
    rotor::io::write_file_atomic((fs::path(c.out) / name).string(), content);
  const ordered_json manifest = rotor::io::make_manifest(command, c.seed, params, outputs);
  rotor::io::write_file_atomic((fs::path(c.out) / "manifest.json").string(),
                               manifest.dump(2) + "\n");
  for (const auto& [name, content] : outputs)
    std::printf("wrote %s (%zu bytes)\n", (fs::path(c.out) / name).string().c_str(),
                content.size());
  std::printf("wrote %s\n", (fs::path(c.out) / "manifest.json").string().c_str());
}

std::string g17(double x) { return rotor::io::format_g17(x); }

// ---------------------------------------------------------------------------
// units

struct UnitsParams {
  bool cesium = false;
  double mass = rotor::constants::cesium_mass;
  double lambda = rotor::constants::default_wavelength;
  double tp = 1.42e-6;
  double T = 9.47e-6;
  double V0 = 0.0;
  double K_target = -1.0;  // < 0: use V0 directly
  double df = 0.0;
};

void run_units(const Common& c, const std::string& command, const UnitsParams& p) {
  rotor::PhysicalParams pp;
  pp.atom_mass = p.mass;
  pp.wavelength = p.lambda;
  pp.pulse_width = p.tp;
  pp.kick_period = p.T;
  pp.frequency_offset = p.df;
  pp.potential_depth = p.V0;
  if (p.K_target >= 0.0) pp.potential_depth = rotor::potential_depth_for(pp, p.K_target);
  const rotor::ScaledParams sp = rotor::scale_params(pp);

  const std::vector<std::pair<std::string, double>> rows = {
      {"omega_r_rad_per_s", sp.recoil_frequency},
      {"hbar_eff", sp.hbar_eff},
      {"eta", sp.duty},
      {"k", sp.kick_amplitude},
      {"K", sp.stochasticity},
      {"rho_b", sp.boundary_momentum},
      {"rho_L", sp.lattice_momentum},
      {"V0_joule", pp.potential_depth},
      {"V0_over_h_hz", pp.potential_depth / (rotor::two_pi * rotor::constants::hbar)},
  };
  for (const auto& [name, value] : rows) std::printf("%-18s %s\n", name.c_str(), g17(value).c_str());

  std::string csv = rotor::io::csv_preamble();
  csv += "quantity,value\n";
  for (const auto& [name, value] : rows) csv += name + "," + g17(value) + "\n";

  ordered_json params;
  params["mass_kg"] = p.mass;
  params["wavelength_m"] = p.lambda;
  params["tp_s"] = p.tp;
  params["T_s"] = p.T;
  params["V0_joule"] = pp.potential_depth;
  params["df_hz"] = p.df;
  if (p.K_target >= 0.0) params["K_target"] = p.K_target;
  emit(c, command, params, {{"units.csv", csv}});
}

// ---------------------------------------------------------------------------
// Pulse / kick-strength resolution shared by keff and quantum.

rotor::PulseShape load_samples(const std::string& path) {
  const std::string text = rotor::io::read_file(path);
  std::vector<double> t, f;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& ch : line)
      if (ch == ',' || ch == '\t') ch = ' ';
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    double tv = 0.0, fv = 0.0;
    try {
      tv = parse_angle(first);
    } catch (const std::exception&) {
      throw std::invalid_argument("samples file line " + std::to_string(lineno) + ": bad time");
    }
    std::string second;
    if (!(ls >> second))
      throw std::invalid_argument("samples file line " + std::to_string(lineno) +
                                  ": expected 'time amplitude'");
    try {
      fv = parse_angle(second);
    } catch (const std::exception&) {
      throw std::invalid_argument("samples file line " + std::to_string(lineno) + ": bad amplitude");
    }
    t.push_back(tv);
    f.push_back(fv);
  }
  return rotor::PulseShape::sampled(t, f);
}

// ---------------------------------------------------------------------------
// keff

struct KeffParams {
  std::string pulse = "square";
  double eta = 0.15;
  std::string samples_file;
  double k = -1.0;  // kick scale
  double K = -1.0;  // total stochasticity; exclusive with k
  std::string rho_min, rho_max;  // empty: auto from the first amplitude zero
  int points = 2001;
};

void run_keff(const Common& c, const std::string& command, const KeffParams& p) {
  if (p.points < 2) throw std::invalid_argument("keff: --points must be >= 2");
  if (p.k >= 0.0 && p.K >= 0.0)
    throw std::invalid_argument("keff: give either --k or --K, not both");

  rotor::PulseShape pulse = rotor::PulseShape::delta();
  if (p.pulse == "square") {
    pulse = rotor::PulseShape::square(p.eta);
  } else if (p.pulse == "sampled") {
    if (p.samples_file.empty())
      throw std::invalid_argument("keff: --samples-file required for sampled pulses");
    pulse = load_samples(p.samples_file);
  } else if (p.pulse != "delta") {
    throw std::invalid_argument("keff: --pulse must be delta, square, or sampled");
  }

  double k = p.k;
  if (p.K >= 0.0) {
    const double area = pulse.area();
    if (area == 0.0) throw std::invalid_argument("keff: pulse area is zero, cannot solve k from K");
    k = p.K / area;
  }
  if (k < 0.0) k = 5.3 / std::max(pulse.area(), 1e-300);  // default: K = 5.3

  const rotor::KickProfile profile = rotor::KickProfile::from_pulse(pulse, k);
  double lo = 0.0, hi = 0.0;
  if (p.rho_min.empty() || p.rho_max.empty()) {
    const double z = profile.first_zero();
    const double span = std::isfinite(z) ? 3.0 * z : 50.0;
    lo = -span;
    hi = span;
  }
  if (!p.rho_min.empty()) lo = parse_angle(p.rho_min);
  if (!p.rho_max.empty()) hi = parse_angle(p.rho_max);
  if (!(lo < hi)) throw std::invalid_argument("keff: need rho-min < rho-max");

  std::string csv = rotor::io::csv_preamble();
  csv += "rho,amplitude,phase\n";
  for (int i = 0; i < p.points; ++i) {
    const double rho = lo + (hi - lo) * i / (p.points - 1);
    csv += g17(rho) + "," + g17(profile.amplitude(rho)) + "," + g17(profile.phase(rho)) + "\n";
  }

  ordered_json params;
  params["pulse"] = p.pulse;
  if (p.pulse == "square") params["eta"] = p.eta;
  if (!p.samples_file.empty()) params["samples_file"] = p.samples_file;
  params["k"] = k;
  params["K"] = k * pulse.area();
  params["rho_min"] = lo;
  params["rho_max"] = hi;
  params["points"] = p.points;
  params["first_zero"] = profile.first_zero();
  emit(c, command, params, {{"keff.csv", csv}});
}

// ---------------------------------------------------------------------------
// poincare

struct PoincareParams {
  double K = 5.3;
  std::string rho_b = "13.5pi";
  int kicks = 120;
  std::string grid = "24x24";
  std::string rho_min, rho_max;  // default: +-rho_b
  std::string boundary_row;      // optional exact-momentum row of initials
};

void run_poincare(const Common& c, const std::string& command, const PoincareParams& p) {
  const double rho_b = parse_angle(p.rho_b);
  const auto [nphi, nrho] = parse_grid(p.grid);
  const double lo = p.rho_min.empty() ? -rho_b : parse_angle(p.rho_min);
  const double hi = p.rho_max.empty() ? rho_b : parse_angle(p.rho_max);
  if (!(lo < hi)) throw std::invalid_argument("poincare: need rho-min < rho-max");

  const rotor::KickProfile profile = rotor::KickProfile::sinc(p.K, rho_b);

  std::vector<rotor::PhaseState> initials;
  initials.reserve(static_cast<size_t>(nphi) * nrho + (p.boundary_row.empty() ? 0 : nphi));
  for (int j = 0; j < nrho; ++j)
    for (int i = 0; i < nphi; ++i)
      initials.push_back({(i + 0.5) * rotor::two_pi / nphi, lo + (j + 0.5) * (hi - lo) / nrho});
  if (!p.boundary_row.empty()) {
    const double rb = parse_angle(p.boundary_row);
    for (int i = 0; i < nphi; ++i)
      initials.push_back({(i + 0.5) * rotor::two_pi / nphi, rb});
  }

  const std::vector<rotor::SectionPoint> pts =
      rotor::poincare_section(initials, profile, p.kicks);

  std::string csv = rotor::io::csv_preamble();
  csv += "trajectory_id,kick,phi,rho\n";
  csv.reserve(csv.size() + pts.size() * 64);
  for (const auto& s : pts) {
    csv += std::to_string(s.trajectory_id);
    csv += ',';
    csv += std::to_string(s.kick);
    csv += ',';
    csv += g17(s.phi);
    csv += ',';
    csv += g17(s.rho);
    csv += '\n';
  }

  ordered_json params;
  params["K"] = p.K;
  params["rho_b"] = rho_b;
  params["kicks"] = p.kicks;
  params["grid"] = p.grid;
  params["rho_min"] = lo;
  params["rho_max"] = hi;
  params["boundary_row"] =
      p.boundary_row.empty() ? ordered_json(nullptr) : ordered_json(parse_angle(p.boundary_row));
  params["n_trajectories"] = initials.size();
  emit(c, command, params, {{"poincare.csv", csv}});
}

// ---------------------------------------------------------------------------
// ensemble

struct EnsembleParams {
  double K = 5.3;
  std::string rho_b = "42.5";
  std::string pulse = "square";   // square (momentum-dependent kick) or delta
  std::string rho_l = "0";
  double sigma = 4.0;
  int atoms = 100000;
  int kicks = 120;
  int record_every = 1;
  double bin_width = 1.0;
};

rotor::KickProfile ensemble_profile(const std::string& pulse, double K, double rho_b) {
  if (pulse == "delta") return rotor::KickProfile::constant(K);
  if (pulse == "square") return rotor::KickProfile::sinc(K, rho_b);
  throw std::invalid_argument("--pulse must be delta or square here");
}

void run_ensemble_cmd(const Common& c, const std::string& command, const EnsembleParams& p) {
  const double rho_b = parse_angle(p.rho_b);
  const double rho_l = parse_angle(p.rho_l);
  const rotor::KickProfile profile = ensemble_profile(p.pulse, p.K, rho_b);

  rotor::EnsembleConfig ec;
  ec.n_atoms = p.atoms;
  ec.sigma_rho = p.sigma;
  ec.rho_L = rho_l;
  ec.n_kicks = p.kicks;
  ec.seed = c.seed;

  std::vector<rotor::PhaseState> states = rotor::sample_initial(ec);
  std::vector<double> rho0(states.size());
  for (size_t i = 0; i < states.size(); ++i) rho0[i] = states[i].rho;

  std::string mcsv = rotor::io::csv_preamble();
  mcsv += "kick,mean_rho,variance,energy,asymmetry,disp_energy\n";
  const auto observer = [&](int kick, const std::vector<rotor::PhaseState>& ss) {
    const rotor::Moments m = rotor::moments(ss, rho_l);
    double disp = 0.0;
    for (size_t i = 0; i < ss.size(); ++i) {
      const double d = ss[i].rho - rho0[i];
      disp += d * d;
    }
    disp /= 2.0 * static_cast<double>(ss.size());
    mcsv += std::to_string(kick) + "," + g17(m.mean) + "," + g17(m.variance) + "," +
            g17(m.energy) + "," + g17(m.asymmetry) + "," + g17(disp) + "\n";
  };
  rotor::evolve_ensemble(states, profile, p.kicks, p.record_every, observer);

  double span = 4.0 * rho_b;
  if (p.pulse == "delta") {
    double mx = 1.0;
    for (const auto& s : states) mx = std::max(mx, std::abs(s.rho));
    span = std::ceil(mx);
  }
  const rotor::MomentumHistogram h = rotor::histogram(states, p.bin_width, -span, span);
  std::string dcsv = rotor::io::csv_preamble();
  dcsv += "bin_lo,bin_hi,count\n";
  for (size_t b = 0; b < h.counts.size(); ++b)
    dcsv += g17(h.bin_edges[b]) + "," + g17(h.bin_edges[b + 1]) + "," +
            std::to_string(h.counts[b]) + "\n";

  ordered_json params;
  params["K"] = p.K;
  params["rho_b"] = rho_b;
  params["pulse"] = p.pulse;
  params["rho_l"] = rho_l;
  params["sigma"] = p.sigma;
  params["atoms"] = p.atoms;
  params["kicks"] = p.kicks;
  params["record_every"] = p.record_every;
  params["bin_width"] = p.bin_width;
  emit(c, command, params, {{"moments.csv", mcsv}, {"distribution.csv", dcsv}});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepParams {
  double K = 5.3;
  std::string rho_b = "42.5";
  std::string pulse = "square";
  std::string rho_l = "0:73:2";
  double sigma = 4.0;
  int atoms = 100000;
  int kicks = 120;
};

void run_sweep(const Common& c, const std::string& command, const SweepParams& p) {
  const double rho_b = parse_angle(p.rho_b);
  const std::vector<double> values = parse_values(p.rho_l);
  const rotor::KickProfile profile = ensemble_profile(p.pulse, p.K, rho_b);

  rotor::EnsembleConfig ec;
  ec.n_atoms = p.atoms;
  ec.sigma_rho = p.sigma;
  ec.n_kicks = p.kicks;
  ec.seed = c.seed;

  const std::vector<rotor::SweepPoint> pts = rotor::asymmetry_sweep(values, ec, profile);
  std::string csv = rotor::io::csv_preamble();
  csv += "rho_L,mean,asymmetry,energy,n_atoms,seed\n";
  for (const auto& s : pts) {
    char seedbuf[24];
    std::snprintf(seedbuf, sizeof seedbuf, "%" PRIu64, s.seed);
    csv += g17(s.rho_L) + "," + g17(s.mean) + "," + g17(s.asymmetry) + "," + g17(s.energy) +
           "," + std::to_string(s.n_atoms) + "," + seedbuf + "\n";
  }

  ordered_json params;
  params["K"] = p.K;
  params["rho_b"] = rho_b;
  params["pulse"] = p.pulse;
  params["rho_l"] = p.rho_l;
  params["sigma"] = p.sigma;
  params["atoms"] = p.atoms;
  params["kicks"] = p.kicks;
  emit(c, command, params, {{"sweep.csv", csv}});
}

// ---------------------------------------------------------------------------
// quantum

struct QuantumParams {
  double k = -1.0;
  double K = -1.0;
  double heff = 0.98;
  std::string pulse = "delta";
  double eta = 0.15;
  int grid = 2048;
  int kicks = 120;
  int n_beta = 16;
  double beta = -1.0;  // >= 0: pin the packet center to this quasimomentum
  double sigma = 4.0;
  std::string rho_l = "0";
  double sigma_packet = -1.0;
  int substeps = 0;
};

void run_quantum_cmd(const Common& c, const std::string& command, const QuantumParams& p) {
  if (p.k >= 0.0 && p.K >= 0.0)
    throw std::invalid_argument("quantum: give either --k or --K, not both");

  rotor::QuantumConfig qc;
  if (p.pulse == "delta")
    qc.pulse = rotor::PulseShape::delta();
  else if (p.pulse == "square")
    qc.pulse = rotor::PulseShape::square(p.eta);
  else
    throw std::invalid_argument("quantum: --pulse must be delta or square");

  double k = p.k;
  if (p.K >= 0.0) k = p.K / qc.pulse.area();
  if (k < 0.0) k = 5.0;

  qc.grid_size = p.grid;
  qc.hbar_eff = p.heff;
  qc.k = k;
  qc.n_kicks = p.kicks;
  qc.n_beta = p.n_beta;
  qc.sigma_rho = p.sigma;
  qc.rho_L = parse_angle(p.rho_l);
  qc.sigma_packet = p.sigma_packet;
  qc.substeps = p.substeps;
  qc.seed = c.seed;
  if (p.beta >= 0.0) {
    if (p.beta >= 1.0) throw std::invalid_argument("quantum: --beta must lie in [0, 1)");
    qc.rho_L = p.beta * p.heff;
    qc.sigma_rho = 0.0;
  }

  const rotor::QuantumSeries qs = rotor::run_quantum(qc);
  std::string csv = rotor::io::csv_preamble();
  csv += "kick,mean_rho,energy,n_beta\n";
  for (size_t i = 0; i < qs.kicks.size(); ++i)
    csv += std::to_string(qs.kicks[i]) + "," + g17(qs.mean_rho[i]) + "," + g17(qs.energy[i]) +
           "," + std::to_string(qs.n_beta) + "\n";

  ordered_json params;
  params["k"] = qc.k;
  params["K"] = qc.k * qc.pulse.area();
  params["heff"] = qc.hbar_eff;
  params["pulse"] = p.pulse;
  if (p.pulse == "square") params["eta"] = p.eta;
  params["grid"] = qc.grid_size;
  params["kicks"] = qc.n_kicks;
  params["n_beta"] = qc.n_beta;
  if (p.beta >= 0.0) params["beta"] = p.beta;
  params["sigma"] = qc.sigma_rho;
  params["rho_l"] = qc.rho_L;
  params["sigma_packet"] = qc.sigma_packet;
  params["substeps"] = qc.substeps;
  params["norm_drift"] = qs.norm_drift;
  emit(c, command, params, {{"quantum.csv", csv}});
}

// ---------------------------------------------------------------------------
// presets: canned runs matching the bundled documentation plots.

void run_preset(const Common& c, const std::string& command, const std::string& name) {
  if (name == "fig1-left") {
    PoincareParams p;
    p.K = 5.3;
    p.rho_b = "13.5pi";
    p.kicks = 120;
    p.grid = "24x24";
    run_poincare(c, command, p);
  } else if (name == "fig1-right") {
    PoincareParams p;
    p.K = 5.3;
    p.rho_b = "13.5pi";
    p.kicks = 120;
    p.grid = "24x12";
    p.rho_min = "-15.5pi";  // window of one lattice period around -rho_b
    p.rho_max = "-11.5pi";
    p.boundary_row = "-13.5pi";
    run_poincare(c, command, p);
  } else if (name == "fig3-sweep") {
    SweepParams p;
    p.K = 5.3;
    p.rho_b = "42.5";
    p.pulse = "square";
    p.rho_l = "0:73:2";
    p.sigma = 4.0;
    p.atoms = 20000;
    p.kicks = 120;
    run_sweep(c, command, p);
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected fig1-left, fig1-right, or fig3-sweep)");
  }
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command = join_args(argc, argv);
  CLI::App app{"pulsed-rotor: classical and quantum kicked-rotor dynamics with "
               "finite-width pulses and momentum-dependent kick strength"};
  app.require_subcommand(1);

  // --- units -------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("units", "Convert lab parameters to scaled map parameters");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto p = std::make_shared<UnitsParams>();
    sc->add_flag("--cesium", p->cesium, "Use the cesium atomic mass (default)");
    auto* o_mass = sc->add_option("--mass", p->mass, "Atom mass [kg]");
    auto* o_lambda = sc->add_option("--lambda", p->lambda, "Lattice wavelength [m]")->capture_default_str();
    auto* o_tp = sc->add_option("--tp", p->tp, "Pulse width t_p [s]")->capture_default_str();
    auto* o_T = sc->add_option("--T", p->T, "Kick period T [s]")->capture_default_str();
    auto* o_V0 = sc->add_option("--V0", p->V0, "Lattice depth V0 [J]");
    auto* o_K = sc->add_option("--K", p->K_target, "Target stochasticity K; solves for V0");
    auto* o_df = sc->add_option("--df", p->df, "Lattice frequency offset [Hz]")->capture_default_str();
    sc->callback([=] {
      const json cfg = load_config(c->config_path);
      c->cfg = cfg;
      check_known(cfg, {"mass", "lambda", "tp", "T", "V0", "K", "df"});
      merge_num(cfg, "mass", o_mass, &p->mass);
      merge_num(cfg, "lambda", o_lambda, &p->lambda);
      merge_num(cfg, "tp", o_tp, &p->tp);
      merge_num(cfg, "T", o_T, &p->T);
      merge_num(cfg, "V0", o_V0, &p->V0);
      merge_num(cfg, "K", o_K, &p->K_target);
      merge_num(cfg, "df", o_df, &p->df);
      if (o_V0->count() > 0 && o_K->count() > 0)
        throw std::invalid_argument("units: give either --V0 or --K, not both");
      if (p->cesium && o_mass->count() > 0)
        throw std::invalid_argument("units: give either --cesium or --mass, not both");
      run_units(*c, command, *p);
    });
  }

  // --- keff ----------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("keff", "Tabulate the momentum-dependent kick amplitude and phase");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto p = std::make_shared<KeffParams>();
    auto* o_pulse = sc->add_option("--pulse", p->pulse, "delta | square | sampled")->capture_default_str();
    auto* o_eta = sc->add_option("--eta", p->eta, "Square-pulse duty cycle t_p/T")->capture_default_str();
    auto* o_sf = sc->add_option("--samples-file", p->samples_file,
                                "CSV/whitespace file of (time, amplitude) samples, time in periods");
    auto* o_k = sc->add_option("--k", p->k, "Kick scale k");
    auto* o_K = sc->add_option("--K", p->K, "Total stochasticity K = k * pulse area");
    auto* o_min = sc->add_option("--rho-min", p->rho_min, "Lowest momentum (angle literals like -40.5pi allowed)");
    auto* o_max = sc->add_option("--rho-max", p->rho_max, "Highest momentum");
    auto* o_pts = sc->add_option("--points", p->points, "Number of tabulation points")->capture_default_str();
    sc->callback([=] {
      const json cfg = load_config(c->config_path);
      c->cfg = cfg;
      check_known(cfg, {"pulse", "eta", "samples-file", "k", "K", "rho-min", "rho-max", "points"});
      merge_str(cfg, "pulse", o_pulse, &p->pulse);
      merge_num(cfg, "eta", o_eta, &p->eta);
      merge_str(cfg, "samples-file", o_sf, &p->samples_file);
      merge_num(cfg, "k", o_k, &p->k);
      merge_num(cfg, "K", o_K, &p->K);
      merge_valstr(cfg, "rho-min", o_min, &p->rho_min);
      merge_valstr(cfg, "rho-max", o_max, &p->rho_max);
      merge_num(cfg, "points", o_pts, &p->points);
      run_keff(*c, command, *p);
    });
  }

  // --- poincare ------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("poincare", "Stroboscopic phase-space sections of the kicked map");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto p = std::make_shared<PoincareParams>();
    auto* o_K = sc->add_option("--K", p->K, "Stochasticity K")->capture_default_str();
    auto* o_rb = sc->add_option("--rho-b", p->rho_b, "Boundary momentum (first kick-amplitude zero)")->capture_default_str();
    auto* o_kicks = sc->add_option("--kicks", p->kicks, "Number of kicks")->capture_default_str();
    auto* o_grid = sc->add_option("--grid", p->grid, "Initial-condition grid COLSxROWS (phi x rho)")->capture_default_str();
    auto* o_min = sc->add_option("--rho-min", p->rho_min, "Lower rho edge of the grid (default -rho_b)");
    auto* o_max = sc->add_option("--rho-max", p->rho_max, "Upper rho edge of the grid (default +rho_b)");
    auto* o_br = sc->add_option("--boundary-row", p->boundary_row,
                                "Add a row of initial conditions at exactly this momentum");
    sc->callback([=] {
      const json cfg = load_config(c->config_path);
      c->cfg = cfg;
      check_known(cfg, {"K", "rho-b", "kicks", "grid", "rho-min", "rho-max", "boundary-row"});
      merge_num(cfg, "K", o_K, &p->K);
      merge_valstr(cfg, "rho-b", o_rb, &p->rho_b);
      merge_num(cfg, "kicks", o_kicks, &p->kicks);
      merge_str(cfg, "grid", o_grid, &p->grid);
      merge_valstr(cfg, "rho-min", o_min, &p->rho_min);
      merge_valstr(cfg, "rho-max", o_max, &p->rho_max);
      merge_valstr(cfg, "boundary-row", o_br, &p->boundary_row);
      run_poincare(*c, command, *p);
    });
  }

  // --- ensemble --------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("ensemble", "Evolve a Gaussian cloud and record moments and the final distribution");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto p = std::make_shared<EnsembleParams>();
    auto* o_K = sc->add_option("--K", p->K, "Stochasticity K")->capture_default_str();
    auto* o_rb = sc->add_option("--rho-b", p->rho_b, "Boundary momentum")->capture_default_str();
    auto* o_pulse = sc->add_option("--pulse", p->pulse, "square (momentum-dependent kick) | delta")->capture_default_str();
    auto* o_rl = sc->add_option("--rho-l", p->rho_l, "Cloud center rho_L")->capture_default_str();
    auto* o_sig = sc->add_option("--sigma", p->sigma, "Cloud momentum width")->capture_default_str();
    auto* o_atoms = sc->add_option("--atoms", p->atoms, "Number of atoms")->capture_default_str();
    auto* o_kicks = sc->add_option("--kicks", p->kicks, "Number of kicks")->capture_default_str();
    auto* o_re = sc->add_option("--record-every", p->record_every, "Moment-recording stride (0: endpoints only)")->capture_default_str();
    auto* o_bw = sc->add_option("--bin-width", p->bin_width, "Histogram bin width")->capture_default_str();
    sc->callback([=] {
      const json cfg = load_config(c->config_path);
      c->cfg = cfg;
      check_known(cfg, {"K", "rho-b", "pulse", "rho-l", "sigma", "atoms", "kicks", "record-every", "bin-width"});
      merge_num(cfg, "K", o_K, &p->K);
      merge_valstr(cfg, "rho-b", o_rb, &p->rho_b);
      merge_str(cfg, "pulse", o_pulse, &p->pulse);
      merge_valstr(cfg, "rho-l", o_rl, &p->rho_l);
      merge_num(cfg, "sigma", o_sig, &p->sigma);
      merge_num(cfg, "atoms", o_atoms, &p->atoms);
      merge_num(cfg, "kicks", o_kicks, &p->kicks);
      merge_num(cfg, "record-every", o_re, &p->record_every);
      merge_num(cfg, "bin-width", o_bw, &p->bin_width);
      run_ensemble_cmd(*c, command, *p);
    });
  }

  // --- sweep -----------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("sweep", "Sweep the cloud momentum offset and record final-state asymmetry");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto p = std::make_shared<SweepParams>();
    auto* o_K = sc->add_option("--K", p->K, "Stochasticity K")->capture_default_str();
    auto* o_rb = sc->add_option("--rho-b", p->rho_b, "Boundary momentum")->capture_default_str();
    auto* o_pulse = sc->add_option("--pulse", p->pulse, "square | delta")->capture_default_str();
    auto* o_rl = sc->add_option("--rho-l", p->rho_l, "Offsets: start:stop:step or comma list")->capture_default_str();
    auto* o_sig = sc->add_option("--sigma", p->sigma, "Cloud momentum width")->capture_default_str();
    auto* o_atoms = sc->add_option("--atoms", p->atoms, "Atoms per sweep point")->capture_default_str();
    auto* o_kicks = sc->add_option("--kicks", p->kicks, "Number of kicks")->capture_default_str();
    sc->callback([=] {
      const json cfg = load_config(c->config_path);
      c->cfg = cfg;
      check_known(cfg, {"K", "rho-b", "pulse", "rho-l", "sigma", "atoms", "kicks"});
      merge_num(cfg, "K", o_K, &p->K);
      merge_valstr(cfg, "rho-b", o_rb, &p->rho_b);
      merge_str(cfg, "pulse", o_pulse, &p->pulse);
      merge_valstr(cfg, "rho-l", o_rl, &p->rho_l);
      merge_num(cfg, "sigma", o_sig, &p->sigma);
      merge_num(cfg, "atoms", o_atoms, &p->atoms);
      merge_num(cfg, "kicks", o_kicks, &p->kicks);
      run_sweep(*c, command, *p);
    });
  }

  // --- quantum -----------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("quantum", "Quantum wave-packet evolution (split-operator)");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto p = std::make_shared<QuantumParams>();
    auto* o_k = sc->add_option("--k", p->k, "Kick scale k");
    auto* o_K = sc->add_option("--K", p->K, "Total stochasticity K = k * pulse area");
    auto* o_h = sc->add_option("--heff", p->heff, "Effective Planck constant")->capture_default_str();
    auto* o_pulse = sc->add_option("--pulse", p->pulse, "delta | square")->capture_default_str();
    auto* o_eta = sc->add_option("--eta", p->eta, "Square-pulse duty cycle")->capture_default_str();
    auto* o_grid = sc->add_option("--grid", p->grid, "Momentum grid size (power of two)")->capture_default_str();
    auto* o_kicks = sc->add_option("--kicks", p->kicks, "Number of kicks")->capture_default_str();
    auto* o_nb = sc->add_option("--n-beta", p->n_beta, "Number of packets (initial-condition samples)")->capture_default_str();
    auto* o_beta = sc->add_option("--beta", p->beta,
                                  "Pin every packet center to quasimomentum beta in [0,1) (sets --rho-l beta*heff, --sigma 0)");
    auto* o_sig = sc->add_option("--sigma", p->sigma, "Packet-center spread")->capture_default_str();
    auto* o_rl = sc->add_option("--rho-l", p->rho_l, "Packet-center mean")->capture_default_str();
    auto* o_sp = sc->add_option("--sigma-packet", p->sigma_packet,
                                "Single-packet momentum width (0: eigenstate; negative: heff)")->capture_default_str();
    auto* o_ss = sc->add_option("--substeps", p->substeps, "Split-operator substeps per finite pulse (0: auto)")->capture_default_str();
    sc->callback([=] {
      const json cfg = load_config(c->config_path);
      c->cfg = cfg;
      check_known(cfg, {"k", "K", "heff", "pulse", "eta", "grid", "kicks", "n-beta", "beta",
                        "sigma", "rho-l", "sigma-packet", "substeps"});
      merge_num(cfg, "k", o_k, &p->k);
      merge_num(cfg, "K", o_K, &p->K);
      merge_num(cfg, "heff", o_h, &p->heff);
      merge_str(cfg, "pulse", o_pulse, &p->pulse);
      merge_num(cfg, "eta", o_eta, &p->eta);
      merge_num(cfg, "grid", o_grid, &p->grid);
      merge_num(cfg, "kicks", o_kicks, &p->kicks);
      merge_num(cfg, "n-beta", o_nb, &p->n_beta);
      merge_num(cfg, "beta", o_beta, &p->beta);
      merge_num(cfg, "sigma", o_sig, &p->sigma);
      merge_valstr(cfg, "rho-l", o_rl, &p->rho_l);
      merge_num(cfg, "sigma-packet", o_sp, &p->sigma_packet);
      merge_num(cfg, "substeps", o_ss, &p->substeps);
      run_quantum_cmd(*c, command, *p);
    });
  }

  // --- preset -----------------------------------------------------------------
  {
    auto* sc = app.add_subcommand("preset", "Run a bundled demonstration configuration");
    auto c = std::make_shared<Common>();
    add_common(sc, c);
    auto name = std::make_shared<std::string>();
    sc->add_option("name", *name, "fig1-left | fig1-right | fig3-sweep")->required();
    sc->callback([=] { run_preset(*c, command, *name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
