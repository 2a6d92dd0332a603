#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rotor::io {

inline constexpr const char* tool_name = "pulsed-rotor";
inline constexpr const char* tool_version = "0.1.0";
inline constexpr int csv_schema = 1;

// First line of every CSV this tool writes: "# pulsed-rotor v0.1.0 schema=1\n".
std::string csv_preamble();

// Shortest round-trip decimal representation (printf %.17g).
std::string format_g17(double x);

// Write content to a temporary file in the same directory, then rename into
// place, so readers never observe a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);  // throws std::runtime_error if unreadable

uint64_t digest_bytes(const std::string& content);  // FNV-1a, 64-bit
std::string hex64(uint64_t v);                      // 16 lowercase hex digits

std::string iso8601_utc_now();

// Run manifest: records the invoked command line, the seed, every resolved
// parameter, and a size + digest for each file the run produced.
nlohmann::ordered_json make_manifest(
    const std::string& command, uint64_t seed, const nlohmann::ordered_json& parameters,
    const std::vector<std::pair<std::string, std::string>>& outputs /* name -> content */);

}  // namespace rotor::io
