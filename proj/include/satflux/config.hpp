#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "satflux/model.hpp"

namespace satflux {

struct InitialSpec {
  std::string kind = "constant";  // constant | ramp | jump_wave | file
  double value = 1.0;             // constant value, or ramp value at η = 0
  double slope = 0.0;             // ramp: v0(η) = value + slope·η
  double v_edge = 1.0;            // jump_wave edge value
  std::string file;               // file: CSV with header eta,v
  bool compatibilize = false;
  double delta0 = 0.1;
  double xi_minus = 0.0;          // initial left front
};

struct OutputSpec {
  std::string directory;  // empty: --out, then SATFLUX_OUT, then "out"
  bool emit_svg = false;
};

/// Everything a `simulate` run needs, as read from a table file or a metadata JSON.
struct RunConfig {
  std::string family = "classical";
  double nu = 1.0;
  double c = 1.0;
  double a = 1.0;
  double m = 0.0;
  double M = 1.0;
  SchemeConfig scheme;
  InitialSpec initial;
  OutputSpec output;

  ModelParams params() const;
  /// Re-checks every numeric constraint; throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses the table format: `[section]` headers, `key = value` lines (numbers, quoted strings,
/// true/false) and `#` comments. Unknown sections or keys are rejected with their line number.
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");

/// `.json` files are read as run metadata (the "config" object); anything else as a table file.
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Applies `key=value` using dotted names such as "model.M" or a bare key if it is unambiguous.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace satflux
