#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace ampsim {

inline constexpr const char* kToolName = "ampsim";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kConfigFormatVersion = "1";

/// Exit codes shared by the command line and run().
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitAcceptance = 3,
  kExitIo = 4,
};

/// Serializable description of one command invocation. Parameters are kept
/// as a JSON object and validated per command; every source of randomness
/// is derived from `seed`.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 42;
  /// Primary artifact path; empty writes to the output stream instead.
  std::string out;
  std::string format_version = kConfigFormatVersion;
};

nlohmann::json to_json(const RunConfig& config);
/// Throws ConfigInvalid naming the offending field.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
/// Sorted keys, two-space indent, trailing newline.
std::string canonical_json(const RunConfig& config);

/// Fills defaults and checks every parameter of the command; throws
/// ConfigInvalid with a message that starts with the field name.
RunConfig validated(const RunConfig& config);

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place. Throws IoError.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

/// Locale-independent shortest round-trip formatting ('.' decimal point).
std::string format_double(double v);

/// Runs the command. Tabular output goes to config.out when set (with a
/// provenance sidecar `<out>.provenance.json`), else to `out`. Returns an
/// ExitCode; configuration and I/O problems are reported on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ampsim
