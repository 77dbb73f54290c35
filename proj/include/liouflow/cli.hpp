#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace liouflow::cli {

/// Configuration problem: unparseable file, unknown keys, bad shapes/values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Parsed scenario file. `model` and `run` keep their JSON form; each run
/// driver validates and extracts the fields it needs before any computation.
struct ScenarioConfig {
  nlohmann::json raw;  // config as loaded, echoed into the manifest
  std::uint64_t seed = 0;
  std::string output_prefix;
  std::string run_kind;
  nlohmann::json model;
  nlohmann::json run;
};

/// Loads and structurally validates a scenario file. Throws ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Parses a scenario from JSON text (used by load_config and tests).
ScenarioConfig parse_config(const std::string& text);

struct RunResult {
  std::vector<std::string> files;  // emitted data files, relative to out_dir
  std::filesystem::path manifest_path;
};

/// Executes the configured scenario, writing data files and a manifest into
/// out_dir. Deterministic for fixed config and seed. Throws ConfigError for
/// configuration problems and NumericalError (or std::exception) for
/// numerical failures.
RunResult run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir);

/// run.kind expected for each CLI subcommand ("traj" -> "trajectory", ...).
/// Throws ConfigError for an unknown subcommand.
std::string run_kind_for_subcommand(const std::string& subcommand);

/// FNV-1a 64-bit checksum, hex-encoded; used in run manifests.
std::string fnv1a64_hex(const std::string& bytes);

/// Shortest text that round-trips the double exactly (17 significant digits).
std::string format_double(double value);

}  // namespace liouflow::cli
