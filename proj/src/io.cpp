#include "rotor/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rotor/util.hpp"

namespace rotor::io {

std::string csv_preamble() {
  std::string s = "# ";
  s += tool_name;
  s += " v";
  s += tool_version;
  s += " schema=";
  s += std::to_string(csv_schema);
  s += "\n";
  return s;
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in && !in.eof()) throw std::runtime_error("read failed: " + path);
  return ss.str();
}

uint64_t digest_bytes(const std::string& content) {
  return fnv1a64(content.data(), content.size());
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string iso8601_utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json make_manifest(
    const std::string& command, uint64_t seed, const nlohmann::ordered_json& parameters,
    const std::vector<std::pair<std::string, std::string>>& outputs) {
  nlohmann::ordered_json m;
  m["tool"] = tool_name;
  m["version"] = tool_version;
  m["schema"] = csv_schema;
  m["command"] = command;
  m["timestamp"] = iso8601_utc_now();
  m["seed"] = seed;
  m["parameters"] = parameters;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& [name, content] : outputs) {
    nlohmann::ordered_json o;
    o["file"] = name;
    o["bytes"] = content.size();
    o["fnv1a64"] = hex64(digest_bytes(content));
    outs.push_back(o);
  }
  m["outputs"] = outs;
  return m;
}

}  // namespace rotor::io
