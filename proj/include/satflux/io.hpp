#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "satflux/config.hpp"
#include "satflux/model.hpp"
#include "satflux/validation.hpp"
#include "satflux/waves.hpp"

namespace satflux {

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_double(double x);

/// Writes to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string snapshot_csv(const DualState& state);
/// Rows of an `eta,v` CSV.
std::vector<std::pair<double, double>> parse_eta_v_csv(const std::string& text, const std::string& origin = "<csv>");

std::string diagnostics_csv(const Trajectory& traj);
std::vector<DiagnosticsRow> parse_diagnostics_csv(const std::string& text, const std::string& origin = "<csv>");

std::string profile_csv(const WaveProfile& profile);
nlohmann::json profile_json(const WaveProfile& profile);

nlohmann::json to_json(const InvariantEntry& entry);
nlohmann::json to_json(const InvariantReport& report);
nlohmann::json to_json(const Tolerances& tol);

nlohmann::json run_metadata(const RunConfig& cfg, const Trajectory& traj, const InvariantReport& report);

/// snapshots/snap_NNNNN.csv, diagnostics.csv, metadata.json and, if requested, SVG plots.
void write_run(const std::filesystem::path& dir, const RunConfig& cfg, const Trajectory& traj);

/// Rebuilds a trajectory from the files written by write_run.
Trajectory load_run(const std::filesystem::path& dir);

/// profile.csv (kappa,U,xi) and profile.json next to it.
void write_profile(const std::filesystem::path& dir, const WaveProfile& profile);

}  // namespace satflux
