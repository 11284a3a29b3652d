#include "satflux/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "satflux/config.hpp"
#include "satflux/driver.hpp"
#include "satflux/errors.hpp"
#include "satflux/io.hpp"
#include "satflux/validation.hpp"
#include "satflux/waves.hpp"

namespace fs = std::filesystem;

namespace satflux {

namespace {

fs::path output_dir(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("SATFLUX_OUT"); env && *env) return env;
  return "out";
}

RunConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
  RunConfig cfg = load_run_config(path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value", kv);
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void summarize(std::ostream& out, const fs::path& dir, const Trajectory& traj) {
  const auto& last = traj.records.back().diag;
  out << dir.string() << ": " << to_string(traj.reason) << " at t=" << format_double(traj.termination_time)
      << ", steps=" << traj.steps << ", ell=" << format_double(last.ell) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flux-saturated Keller-Segel simulator in mass coordinates", "satflux"};
  app.require_subcommand(1);
  bool seedless = false;

  auto* sim = app.add_subcommand("simulate", "Run the dual solver with front tracking");
  std::string sim_config, sim_out;
  std::vector<std::string> sim_sets;
  sim->add_option("--config", sim_config, "Run configuration (table file or metadata JSON)")->required();
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_option("--set", sim_sets, "Override a config key, e.g. --set model.M=4");
  sim->add_flag("--seedless", seedless, "Accepted for compatibility; runs are deterministic");

  auto* tw = app.add_subcommand("tw", "Construct a traveling-wave profile");
  std::string tw_kind, tw_out;
  double tw_a = 1, tw_c = 1, tw_m = 0, tw_nu = 1, tw_xi = 0;
  std::optional<double> tw_M, tw_tau, tw_v_edge;
  int tw_N = 2001;
  tw->add_option("--kind", tw_kind, "continuous or jump")->required()->check(CLI::IsMember({"continuous", "jump"}));
  tw->add_option("--a", tw_a, "Chemotactic sensitivity");
  tw->add_option("--c", tw_c, "Saturation speed");
  tw->add_option("--m", tw_m, "Porous-media exponent");
  tw->add_option("--nu", tw_nu, "Flux scale");
  tw->add_option("--M", tw_M, "Mass (jump: defaults to 2c/a)");
  tw->add_option("--tau", tw_tau, "Reduced speed (continuous: defaults to the entropic value -aM/2)");
  tw->add_option("--v-edge", tw_v_edge, "Edge value (jump)");
  tw->add_option("--xi-minus", tw_xi, "Left front position");
  tw->add_option("--N", tw_N, "Number of nodes");
  tw->add_option("--out", tw_out, "Output directory");
  tw->add_flag("--seedless", seedless, "Accepted for compatibility");

  auto* chk = app.add_subcommand("check", "Validate a stored run");
  std::string chk_run, chk_report;
  chk->add_option("--run", chk_run, "Run directory")->required();
  chk->add_option("--report", chk_report, "Report path (default RUN/report.json)");
  chk->add_flag("--seedless", seedless, "Accepted for compatibility");

  auto* sweep = app.add_subcommand("sweep", "Run simulate for several values of one config key");
  std::string sw_config, sw_param, sw_out;
  std::vector<std::string> sw_values;
  unsigned sw_jobs = std::max(1u, std::thread::hardware_concurrency());
  sweep->add_option("--config", sw_config, "Base run configuration")->required();
  sweep->add_option("--param", sw_param, "Key to vary, e.g. M or model.M")->required();
  sweep->add_option("--values", sw_values, "Values")->required()->delimiter(',');
  sweep->add_option("--jobs", sw_jobs, "Concurrent member runs");
  sweep->add_option("--out", sw_out, "Output directory");
  sweep->add_flag("--seedless", seedless, "Accepted for compatibility");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*sim) {
      const RunConfig cfg = load_with_overrides(sim_config, sim_sets);
      const fs::path dir = output_dir(sim_out, cfg.output.directory);
      const Trajectory traj = simulate(cfg);
      write_run(dir, cfg, traj);
      summarize(out, dir, traj);
      return kExitOk;
    }
    if (*tw) {
      ModelParams p;
      p.a = tw_a;
      p.m = tw_m;
      p.flux = FluxModel::classical(tw_nu, tw_c);
      WaveProfile prof;
      if (tw_kind == "jump") {
        p.M = tw_M.value_or(2.0 * tw_c / tw_a);
        prof = jump_profile(p, tw_v_edge.value_or(1.0), tw_xi, tw_N);
      } else {
        if (!tw_M) throw ConfigError("--M is required for continuous profiles", "--M");
        p.M = *tw_M;
        prof = continuous_profile(p, p.M, tw_tau.value_or(-0.5 * tw_a * p.M), tw_xi, tw_N);
      }
      const fs::path dir = output_dir(tw_out, "");
      write_profile(dir, prof);
      out << dir.string() << ": " << to_string(prof.kind) << " profile, sigma=" << format_double(prof.sigma)
          << ", kappa_bar=" << format_double(prof.kappa_bar) << "\n";
      return kExitOk;
    }
    if (*chk) {
      const fs::path dir = chk_run;
      const Trajectory traj = load_run(dir);
      const InvariantReport rep = validate_trajectory(traj);
      const fs::path report = chk_report.empty() ? dir / "report.json" : fs::path(chk_report);
      write_text_atomic(report, to_json(rep).dump(2) + "\n");
      for (const auto& e : rep.entries) {
        out << (e.passed ? "PASS " : "FAIL ") << e.name << " residual=" << format_double(e.max_residual)
            << " tol=" << format_double(e.tolerance) << "\n";
      }
      return rep.all_passed() ? kExitOk : kExitValidation;
    }
    if (*sweep) {
      const RunConfig base = load_with_overrides(sw_config, {});
      const fs::path root = output_dir(sw_out, base.output.directory);
      const std::string tag = sw_param.substr(sw_param.find('.') == std::string::npos ? 0 : sw_param.find('.') + 1);
      std::vector<RunConfig> members;
      for (const auto& value : sw_values) {
        RunConfig cfg = base;
        set_config_value(cfg, sw_param, value);
        cfg.validate();
        members.push_back(cfg);
      }
      const std::size_t jobs = std::max(1u, sw_jobs);
      for (std::size_t start = 0; start < members.size(); start += jobs) {
        std::vector<std::future<Trajectory>> pending;
        const std::size_t stop = std::min(members.size(), start + jobs);
        for (std::size_t k = start; k < stop; ++k) {
          pending.push_back(std::async(std::launch::async, [&members, k] { return simulate(members[k]); }));
        }
        for (std::size_t k = start; k < stop; ++k) {
          const Trajectory traj = pending[k - start].get();
          const fs::path dir = root / (tag + "=" + sw_values[k]);
          write_run(dir, members[k], traj);
          summarize(out, dir, traj);
        }
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace satflux
