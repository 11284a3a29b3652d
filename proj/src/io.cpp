#include "satflux/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "satflux/errors.hpp"
#include "satflux/fronts.hpp"
#include "satflux/svg.hpp"

namespace fs = std::filesystem;

namespace satflux {

namespace {

const char* const kDiagHeader =
    "t,sigma_minus,sigma_plus,ell,mu_bar,sigma_c,mass_center,vmin,vmax,mass_law_residual,bv_seminorm,rh_minus,rh_plus";

std::vector<double> split_numbers(const std::string& line, const std::string& where) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    const char* b = line.data() + start;
    const char* e = line.data() + end;
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
    double x = 0.0;
    const auto res = std::from_chars(b, e, x);
    if (res.ec != std::errc() || res.ptr != e) throw ConfigError("malformed number in CSV", where);
    out.push_back(x);
    start = end + 1;
  }
  return out;
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu.csv", k);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open file", path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::string snapshot_csv(const DualState& state) {
  std::string out = "eta,v\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    out += format_double(state.eta(i));
    out += ',';
    out += format_double(state.v[i]);
    out += '\n';
  }
  return out;
}

std::vector<std::pair<double, double>> parse_eta_v_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<double, double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "eta,v") throw ConfigError("expected header eta,v", origin + ":1");
      continue;
    }
    const auto xs = split_numbers(line, origin + ":" + std::to_string(lineno));
    if (xs.size() != 2) throw ConfigError("expected two columns", origin + ":" + std::to_string(lineno));
    rows.emplace_back(xs[0], xs[1]);
  }
  return rows;
}

std::string diagnostics_csv(const Trajectory& traj) {
  std::string out = kDiagHeader;
  out += '\n';
  for (const auto& rec : traj.records) {
    const DiagnosticsRow& d = rec.diag;
    const double cols[] = {d.t,    d.sigma_minus,       d.sigma_plus,  d.ell,      d.mu_bar,
                           d.sigma_c, d.mass_center,    d.vmin,        d.vmax,     d.mass_law_residual,
                           d.bv_seminorm, d.rh_minus,   d.rh_plus};
    for (std::size_t k = 0; k < std::size(cols); ++k) {
      if (k) out += ',';
      out += format_double(cols[k]);
    }
    out += '\n';
  }
  return out;
}

std::vector<DiagnosticsRow> parse_diagnostics_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<DiagnosticsRow> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != kDiagHeader) throw ConfigError("unexpected diagnostics header", origin + ":1");
      continue;
    }
    const auto x = split_numbers(line, origin + ":" + std::to_string(lineno));
    if (x.size() != 13) throw ConfigError("expected 13 columns", origin + ":" + std::to_string(lineno));
    rows.push_back({x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8], x[9], x[10], x[11], x[12]});
  }
  return rows;
}

std::string profile_csv(const WaveProfile& profile) {
  std::string out = "kappa,U,xi\n";
  for (std::size_t k = 0; k < profile.kappa.size(); ++k) {
    out += format_double(profile.kappa[k]) + ',' + format_double(profile.U[k]) + ',' + format_double(profile.xi[k]) + '\n';
  }
  return out;
}

nlohmann::json profile_json(const WaveProfile& p) {
  nlohmann::json j;
  j["kind"] = to_string(p.kind);
  j["sigma"] = p.sigma;
  j["kappa_bar"] = p.kappa_bar;
  j["tau"] = p.tau ? nlohmann::json(*p.tau) : nlohmann::json(nullptr);
  j["v_edge"] = p.v_edge ? nlohmann::json(*p.v_edge) : nlohmann::json(nullptr);
  j["K"] = p.K_const;
  j["M"] = p.params.M;
  j["a"] = p.params.a;
  j["m"] = p.params.m;
  j["entropic"] = p.entropic;
  j["flux"] = {{"family", p.params.flux.family()}, {"c", p.params.flux.c()}, {"alpha", p.params.flux.alpha()}};
  if (p.params.flux.nu()) j["flux"]["nu"] = *p.params.flux.nu();
  j["xi_minus"] = p.xi_minus();
  j["xi_plus"] = p.xi_plus();
  j["residuals"] = {{"ode", p.ode_residual}, {"mass", p.mass_residual}};
  return j;
}

nlohmann::json to_json(const InvariantEntry& e) {
  nlohmann::json j;
  j["name"] = e.name;
  j["max_residual"] = e.max_residual;
  j["tolerance"] = e.tolerance;
  j["passed"] = e.passed;
  j["worst_t"] = e.worst_t;
  j["worst_eta"] = std::isfinite(e.worst_eta) ? nlohmann::json(e.worst_eta) : nlohmann::json(nullptr);
  j["detail"] = e.detail;
  return j;
}

nlohmann::json to_json(const InvariantReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : report.entries) arr.push_back(to_json(e));
  return arr;
}

nlohmann::json to_json(const Tolerances& t) {
  return {{"mass_law", t.mass_law},
          {"bound_cells", t.bound_cells},
          {"front_consistency", t.front_consistency},
          {"support_law", t.support_law},
          {"center_identity", t.center_identity},
          {"center_sign_threshold", t.center_sign_threshold},
          {"blowup_forecast", t.blowup_forecast},
          {"blowup_reach", t.blowup_reach},
          {"convergence_order", t.convergence_order},
          {"convergence_growth", t.convergence_growth},
          {"envelope_warmup", t.envelope_warmup}};
}

nlohmann::json run_metadata(const RunConfig& cfg, const Trajectory& traj, const InvariantReport& report) {
  nlohmann::json j;
  j["config"] = to_json(cfg);
  j["termination"] = {{"reason", to_string(traj.reason)}, {"time", traj.termination_time}, {"detail", traj.detail}};
  j["steps"] = traj.steps;
  j["eps"] = traj.eps;
  j["eps_bc"] = traj.eps_bc;
  j["initial_length"] = traj.initial_length;
  j["invariants"] = to_json(report);
  j["tolerances"] = to_json(default_tolerances());
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    snaps.push_back({{"index", k}, {"t", traj.records[k].state.t}, {"file", "snapshots/" + snapshot_name(k)}});
  }
  j["snapshots"] = snaps;
  return j;
}

void write_run(const fs::path& dir, const RunConfig& cfg, const Trajectory& traj) {
  fs::create_directories(dir / "snapshots");
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    write_text_atomic(dir / "snapshots" / snapshot_name(k), snapshot_csv(traj.records[k].state));
  }
  write_text_atomic(dir / "diagnostics.csv", diagnostics_csv(traj));
  const InvariantReport report = validate_trajectory(traj);
  write_text_atomic(dir / "metadata.json", run_metadata(cfg, traj, report).dump(2) + "\n");

  if (cfg.output.emit_svg) {
    PlotSeries ell{"ell(t)", {}, {}};
    for (const auto& rec : traj.records) {
      ell.x.push_back(rec.diag.t);
      ell.y.push_back(rec.diag.ell);
    }
    write_text_atomic(dir / "ell.svg", svg_line_plot("support length", "t", "ell", {ell}));

    std::vector<PlotSeries> profiles;
    const std::size_t n = traj.records.size();
    const std::size_t picks = std::min<std::size_t>(6, n);
    for (std::size_t p = 0; p < picks; ++p) {
      const std::size_t k = (picks == 1) ? 0 : p * (n - 1) / (picks - 1);
      const auto snap = reconstruct(traj.records[k].state, traj.records[k].fronts);
      profiles.push_back({"t=" + format_double(snap.t).substr(0, 8), snap.x, snap.u});
    }
    write_text_atomic(dir / "density.svg", svg_line_plot("density snapshots", "x", "u", profiles));
  }
}

Trajectory load_run(const fs::path& dir) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text(dir / "metadata.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid metadata: ") + e.what(), (dir / "metadata.json").string());
  }
  const RunConfig cfg = run_config_from_json(meta);
  Trajectory traj;
  traj.params = cfg.params();
  traj.config = cfg.scheme;
  traj.eps = meta.at("eps").get<double>();
  traj.eps_bc = meta.at("eps_bc").get<double>();
  traj.initial_length = meta.at("initial_length").get<double>();
  traj.steps = meta.at("steps").get<long long>();
  traj.reason = termination_from_string(meta.at("termination").at("reason").get<std::string>());
  traj.termination_time = meta.at("termination").at("time").get<double>();
  traj.detail = meta.at("termination").at("detail").get<std::string>();

  const auto rows = parse_diagnostics_csv(read_text(dir / "diagnostics.csv"), (dir / "diagnostics.csv").string());
  const auto& snaps = meta.at("snapshots");
  if (snaps.size() != rows.size()) throw ConfigError("snapshot count does not match diagnostics rows", dir.string());
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const fs::path file = dir / snaps[k].at("file").get<std::string>();
    const auto ev = parse_eta_v_csv(read_text(file), file.string());
    TrajectoryRecord rec;
    rec.state.t = snaps[k].at("t").get<double>();
    rec.state.params = traj.params;
    for (const auto& [eta, v] : ev) rec.state.v.push_back(v);
    rec.diag = rows[k];
    rec.fronts = FrontState{rows[k].t, rows[k].sigma_minus, rows[k].sigma_plus};
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

void write_profile(const fs::path& dir, const WaveProfile& profile) {
  fs::create_directories(dir);
  write_text_atomic(dir / "profile.csv", profile_csv(profile));
  write_text_atomic(dir / "profile.json", profile_json(profile).dump(2) + "\n");
}

}  // namespace satflux
