#pragma once

// Command-line front end. Every command reads an effective configuration
// (config file section overlaid with command-line flags), runs, and writes
// either a key/value report or a CSV whose comment header records the tool
// version, a hash of the effective configuration and the master seed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gbench::cli {

inline constexpr std::string_view kToolVersion = "gbench 1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 20160301;

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitInvariant = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- configuration ---------------------------------------------------------

/// Parses a TOML (".toml") or JSON (anything else) file into JSON.
nlohmann::json load_config_file(const std::string& path);

/// The section of `file_config` that applies to `command`: the table named
/// after the command if present, otherwise the top-level keys that are not
/// tables.
nlohmann::json command_section(const nlohmann::json& file_config, const std::string& command);

/// 64-bit FNV-1a of the canonical (sorted-key) JSON serialization, as 16 hex
/// digits.
std::string config_hash(const nlohmann::json& config);

/// Master seed: explicit config value, else GB_SEED from the environment,
/// else kDefaultSeed.
std::uint64_t resolve_seed(const nlohmann::json& config);

/// Parses "1,2,3" or "0.5" into numbers; accepts "inf".
std::vector<double> parse_number_list(const std::string& text);
double parse_number(const std::string& text);

// ---- output ----------------------------------------------------------------

/// 12 significant digits, locale independent; "inf"/"-inf"/"nan" for
/// non-finite values.
std::string format_number(double v);

void write_csv_header(std::ostream& out, const std::string& command, const nlohmann::json& config,
                      std::uint64_t seed);

// ---- entry point -----------------------------------------------------------

/// Runs the CLI with the given arguments (argv[0] included) and returns the
/// process exit code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbench::cli
