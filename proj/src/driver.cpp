#include "satflux/driver.hpp"

#include <algorithm>
#include <memory>

#include "satflux/errors.hpp"
#include "satflux/io.hpp"

namespace satflux {

namespace {

Sampler tabulated_sampler(const std::string& path) {
  auto rows = std::make_shared<std::vector<std::pair<double, double>>>(parse_eta_v_csv(read_text(path), path));
  if (rows->size() < 2) throw ConfigError("initial file needs at least two rows", path);
  for (std::size_t k = 1; k < rows->size(); ++k) {
    if (!((*rows)[k].first > (*rows)[k - 1].first)) throw ConfigError("eta column must increase", path);
  }
  return [rows](double eta) {
    const auto& r = *rows;
    if (eta <= r.front().first) return r.front().second;
    if (eta >= r.back().first) return r.back().second;
    const auto it = std::upper_bound(r.begin(), r.end(), eta, [](double x, const auto& p) { return x < p.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (eta - x0) / (x1 - x0);
  };
}

Sampler initial_sampler(const RunConfig& cfg, const ModelParams& params) {
  const InitialSpec& in = cfg.initial;
  if (in.kind == "constant") {
    const double v = in.value;
    return [v](double) { return v; };
  }
  if (in.kind == "ramp") {
    const double v = in.value, s = in.slope;
    return [v, s](double eta) { return v + s * eta; };
  }
  if (in.kind == "jump_wave") {
    const double mp1 = params.m + 1.0, c = params.flux.c(), a = params.a;
    const double base = std::pow(in.v_edge, mp1);
    const FluxModel flux = params.flux;
    return [=](double eta) {
      return 1.0 / std::pow(base + (mp1 / a) * flux.G_difference(c, c - a * eta), 1.0 / mp1);
    };
  }
  return tabulated_sampler(in.file);
}

}  // namespace

DualState make_initial_state(const RunConfig& cfg) {
  cfg.validate();
  const ModelParams params = cfg.params();
  if (cfg.initial.compatibilize) {
    const double eps = cfg.scheme.eps_for(params.M);
    return compatibilize_initial(params, initial_sampler(cfg, params), eps, cfg.scheme.kappa_bc, cfg.initial.delta0)
        .to_state(params, cfg.scheme.N);
  }
  if (cfg.initial.kind == "jump_wave") return steady_jump_profile(params, cfg.initial.v_edge, cfg.scheme.N);
  return sample_state(params, cfg.scheme.N, initial_sampler(cfg, params));
}

Trajectory simulate(const RunConfig& cfg) {
  return run(make_initial_state(cfg), cfg.scheme, cfg.initial.xi_minus);
}

}  // namespace satflux
