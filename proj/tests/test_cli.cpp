// End-to-end tests of the command-line tool: exit codes, CSV and manifest
// output, configuration precedence, documented physics checks, and
// byte-level reproducibility. The binary path arrives via PULSED_ROTOR_BIN.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rotor/io.hpp>
#include <rotor/util.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;
namespace io = rotor::io;

namespace {

std::string bin_path() {
  const char* p = std::getenv("PULSED_ROTOR_BIN");
  REQUIRE_MESSAGE(p != nullptr, "PULSED_ROTOR_BIN must point at the CLI binary");
  return std::string(p);
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "rotor-cli-test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Run a shell command, return its exit code.
int run(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  if (st == -1) return -1;
  if (WIFEXITED(st)) return WEXITSTATUS(st);
  return -2;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

// Parse a CSV body: skip '#' comment lines, drop the header, return rows.
std::vector<std::vector<std::string>> csv_rows(const std::string& body) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream ss(body);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(split(line));
  }
  return rows;
}

double csv_value(const std::string& body, const std::string& key) {
  for (const auto& row : csv_rows(body))
    if (row.size() >= 2 && row[0] == key) return std::stod(row[1]);
  FAIL("key not found in csv: " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("units subcommand reports the reference scaled parameters") {
  const fs::path dir = fresh_dir("units");
  const std::string cmd = "\"" + bin_path() + "\" units --cesium --K 5.3 --df 1e6 --out \"" +
                          dir.string() + "\" > " + (dir / "stdout.txt").string();
  CHECK(run(cmd) == 0);
  const std::string csv = slurp(dir / "units.csv");
  CHECK(csv.rfind("# pulsed-rotor v0.1.0 schema=1\n", 0) == 0);
  CHECK(std::abs(csv_value(csv, "eta") - 0.150) < 0.001);
  CHECK(std::abs(csv_value(csv, "hbar_eff") - 0.98) < 0.01);
  CHECK(csv_value(csv, "K") == doctest::Approx(5.3).epsilon(1e-12));
  CHECK(std::abs(csv_value(csv, "rho_b") - rotor::two_pi / csv_value(csv, "eta")) < 1e-8);
  CHECK(std::abs(csv_value(csv, "rho_L") - 119.0) < 0.5);
  CHECK(csv_value(csv, "V0_joule") > 0.0);
  // manifest written alongside
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("bad invocations exit with the usage code") {
  const fs::path dir = fresh_dir("badargs");
  const std::string null_out = " > /dev/null 2>&1";
  CHECK(run("\"" + bin_path() + "\" units --no-such-flag" + null_out) == 2);
  CHECK(run("\"" + bin_path() + "\" frobnicate" + null_out) == 2);
  CHECK(run("\"" + bin_path() + "\" ensemble --sigma -1 --atoms 10 --out \"" +
            dir.string() + "\"" + null_out) == 2);
  CHECK(run("\"" + bin_path() + "\" --help > /dev/null 2>&1") == 0);
}

TEST_CASE("invalid pulse parameters exit 2 and name the violated constraint") {
  const fs::path dir = fresh_dir("badpulse");
  const fs::path err = dir / "err.txt";
  const int rc = run("\"" + bin_path() + "\" keff --pulse square --eta 1.5 --out \"" +
                     dir.string() + "\" > /dev/null 2> " + err.string());
  CHECK(rc == 2);
  const std::string msg = slurp(err);
  CHECK(msg.find("duty") != std::string::npos);
}

TEST_CASE("config files merge under flags and the manifest records both") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream f(dir / "cfg.json");
    f << "{\"atoms\": 500, \"kicks\": 30}\n";
  }
  const int rc = run("\"" + bin_path() + "\" ensemble --config \"" +
                     (dir / "cfg.json").string() +
                     "\" --atoms 400 --out \"" + dir.string() +
                     "\" > /dev/null 2>&1");
  CHECK(rc == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m.at("parameters").at("atoms") == 400);   // flag wins
  CHECK(m.at("parameters").at("kicks") == 30);    // config supplies the rest
  CHECK(m.at("parameters").at("config").at("atoms") == 500);  // raw file kept
  CHECK(m.at("parameters").at("config_file") == (dir / "cfg.json").string());
}

TEST_CASE("malformed or unknown configuration is rejected") {
  const fs::path dir = fresh_dir("badcfg");
  {
    std::ofstream f(dir / "broken.json");
    f << "{not json";
  }
  CHECK(run("\"" + bin_path() + "\" ensemble --config \"" +
            (dir / "broken.json").string() + "\" > /dev/null 2>&1") == 2);
  {
    std::ofstream f(dir / "unknown.json");
    f << "{\"no_such_option\": 1}\n";
  }
  CHECK(run("\"" + bin_path() + "\" ensemble --config \"" +
            (dir / "unknown.json").string() + "\" > /dev/null 2>&1") == 2);
}

TEST_CASE("documented phase-portrait run stays inside the momentum boundary") {
  const fs::path dir = fresh_dir("poincare");
  const int rc = run("\"" + bin_path() +
                     "\" poincare --K 5.3 --rho-b 13.5pi --kicks 120 --grid 20x20 --out \"" +
                     dir.string() + "\" > /dev/null 2>&1");
  CHECK(rc == 0);
  const auto rows = csv_rows(slurp(dir / "poincare.csv"));
  REQUIRE(rows.size() == 400u * 121u);
  double worst = 0.0;
  for (const auto& r : rows) {
    REQUIRE(r.size() == 4u);
    worst = std::max(worst, std::abs(std::stod(r[3])));
  }
  CHECK(worst <= 13.5 * rotor::pi + 2.0);
}

TEST_CASE("angle literals and their decimal forms produce identical output") {
  const fs::path a = fresh_dir("angle-a");
  const fs::path b = fresh_dir("angle-b");
  const std::string common = " poincare --K 5.3 --kicks 20 --grid 6x6 --out ";
  CHECK(run("\"" + bin_path() + "\"" + common + "\"" + a.string() +
            "\" --rho-b 13.5pi > /dev/null 2>&1") == 0);
  CHECK(run("\"" + bin_path() + "\"" + common + "\"" + b.string() +
            "\" --rho-b 42.411500823462205 > /dev/null 2>&1") == 0);
  CHECK(slurp(a / "poincare.csv") == slurp(b / "poincare.csv"));
}

TEST_CASE("repeat runs and thread counts cannot change a single byte") {
  const fs::path a = fresh_dir("sweep-a");
  const fs::path b = fresh_dir("sweep-b");
  const fs::path c = fresh_dir("sweep-c");
  const std::string args =
      " sweep --K 5.3 --rho-b 42.5 --atoms 2000 --kicks 40 --sigma 4 "
      "--rho-l 0:20:10 --seed 11 --out ";
  CHECK(run("\"" + bin_path() + "\"" + args + "\"" + a.string() + "\" > /dev/null 2>&1") == 0);
  CHECK(run("\"" + bin_path() + "\"" + args + "\"" + b.string() + "\" > /dev/null 2>&1") == 0);
  CHECK(run("OMP_NUM_THREADS=3 \"" + bin_path() + "\"" + args + "\"" +
            c.string() + "\" > /dev/null 2>&1") == 0);
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  CHECK(slurp(a / "sweep.csv") == slurp(c / "sweep.csv"));
  // a different seed must actually change the data
  const fs::path d = fresh_dir("sweep-d");
  CHECK(run("\"" + bin_path() + "\"" + args.substr(0, args.find("--seed")) +
            "--seed 12 --out \"" + d.string() + "\" > /dev/null 2>&1") == 0);
  CHECK(slurp(a / "sweep.csv") != slurp(d / "sweep.csv"));
}

TEST_CASE("manifest digests match the files on disk") {
  const fs::path dir = fresh_dir("digest");
  CHECK(run("\"" + bin_path() + "\" ensemble --atoms 500 --kicks 10 --out \"" +
            dir.string() + "\" > /dev/null 2>&1") == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  REQUIRE(m.at("outputs").size() >= 1u);
  for (const auto& out : m.at("outputs")) {
    const std::string body = slurp(dir / out.at("file").get<std::string>());
    CHECK(out.at("bytes").get<size_t>() == body.size());
    CHECK(out.at("fnv1a64").get<std::string>() == io::hex64(io::digest_bytes(body)));
  }
}

TEST_CASE("boundary-row preset emits machine-exact pinned momenta") {
  const fs::path dir = fresh_dir("fig1-right");
  CHECK(run("\"" + bin_path() + "\" preset fig1-right --out \"" + dir.string() +
            "\" > /dev/null 2>&1") == 0);
  const auto rows = csv_rows(slurp(dir / "poincare.csv"));
  const std::string pinned = io::format_g17(-13.5 * rotor::pi);
  int boundary_rows = 0;
  for (const auto& r : rows) {
    REQUIRE(r.size() == 4u);
    if (std::stoi(r[0]) >= 24 * 12) {  // ids after the interior grid
      CHECK(r[3] == pinned);
      ++boundary_rows;
    }
  }
  CHECK(boundary_rows == 24 * 121);  // 24 boundary trajectories, kicks 0..120
}

TEST_CASE("default output directory comes from the environment") {
  const fs::path dir = fresh_dir("envout");
  CHECK(run("cd / && PULSED_ROTOR_OUTDIR=\"" + dir.string() + "\" \"" + bin_path() +
            "\" units --cesium --K 5.3 > /dev/null 2>&1") == 0);
  CHECK(fs::exists(dir / "units.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("quantum subcommand writes a well-formed series") {
  const fs::path dir = fresh_dir("quantum");
  CHECK(run("\"" + bin_path() +
            "\" quantum --grid 256 --heff 2 --K 5 --kicks 5 --n-beta 2 --out \"" +
            dir.string() + "\" > /dev/null 2>&1") == 0);
  const auto rows = csv_rows(slurp(dir / "quantum.csv"));
  REQUIRE(rows.size() == 6u);
  CHECK(std::stoi(rows[0][0]) == 0);
  CHECK(std::stoi(rows[5][0]) == 5);
  for (const auto& r : rows) CHECK(std::stoi(r[3]) == 2);  // n_beta column
}
