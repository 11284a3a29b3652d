#include "satflux/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "satflux/dual_solver.hpp"
#include "satflux/errors.hpp"
#include "satflux/fronts.hpp"
#include "satflux/numerics.hpp"

namespace satflux {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

InvariantEntry entry(std::string name, double tolerance) {
  InvariantEntry e;
  e.name = std::move(name);
  e.tolerance = tolerance;
  e.worst_eta = kNaN;
  return e;
}

void require_records(const Trajectory& traj) {
  if (traj.records.empty()) throw InsufficientDataError("trajectory has no records");
}

// Keeps the point with the largest residual relative to its limit; any residual above its limit fails.
struct Worst {
  double ratio = -std::numeric_limits<double>::infinity();
  void offer(InvariantEntry& e, double residual, double limit, double t, double eta = kNaN) {
    const double r = limit > 0.0 ? residual / limit - 1.0 : residual - limit;
    if (r > ratio) {
      ratio = r;
      e.max_residual = residual;
      e.tolerance = limit;
      e.worst_t = t;
      e.worst_eta = eta;
    }
    if (r > 0.0) e.passed = false;
  }
};

}  // namespace

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

bool InvariantReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const InvariantEntry& e) { return e.passed; });
}

const InvariantEntry& InvariantReport::at(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no invariant entry named " + name);
}

double bv_seminorm(const DualState& state) {
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < state.size(); ++i) s.add(std::abs(state.v[i + 1] - state.v[i]));
  return s.value();
}

EnvelopeParams make_envelope(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  const DualState& s0 = traj.records.front().state;
  const ModelParams& p = traj.params;
  const FluxModel& flux = p.flux;
  const double c = flux.c();

  EnvelopeParams env;
  env.lambda_env = traj.config.lambda_env;
  env.eps = traj.eps;
  env.sigma1 = *std::min_element(s0.v.begin(), s0.v.end());
  const double el = std::pow(env.eps, env.lambda_env);
  if (!(el < c)) throw ParameterError("envelope: eps^lambda must be below c");
  env.A = 2.0 * (c - el) / p.M;
  env.h.resize(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) {
    env.h[i] = flux.G_difference(env.A * s0.eta(i) - c + el, c - el) / env.A;
  }
  const double vmax0 = *std::max_element(s0.v.begin(), s0.v.end());
  env.B0 = std::max(p.M * flux.G(c) / c, vmax0) * (1.0 + 1e-12);

  // C5 is measured with the same quantity the upper check compares against B(t) + max h.
  const std::size_t warm = std::min<std::size_t>(tol.envelope_warmup, traj.records.size() - 1);
  for (std::size_t k = 1; k <= warm; ++k) {
    const auto& rec = traj.records[k];
    if (!(rec.state.t > 0.0)) continue;
    const double vmax = *std::max_element(rec.state.v.begin(), rec.state.v.end());
    env.C5 = std::max(env.C5, (vmax - env.h_max() - env.B0) / rec.state.t);
  }
  return env;
}

InvariantEntry check_mass_law(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  const double limit = tol.mass_law * (1.0 + traj.config.t_end);
  InvariantEntry e = entry("mass_law", limit);
  const double l0 = traj.records.front().state.length();
  const double slope = traj.mass_slope();
  Worst w;
  for (const auto& rec : traj.records) {
    const double r = std::abs(rec.state.length() - l0 - slope * rec.state.t);
    w.offer(e, r, limit, rec.state.t);
  }
  return e;
}

std::vector<InvariantEntry> check_bounds(const Trajectory& traj, const EnvelopeParams& env, const Tolerances& tol) {
  require_records(traj);
  const double h = traj.params.M / traj.config.N;
  const double slack = tol.bound_cells * h;
  InvariantEntry lower = entry("lower_bound", 0.0);
  InvariantEntry upper = entry("upper_bound", 0.0);
  Worst wl, wu;
  for (const auto& rec : traj.records) {
    const auto& v = rec.state.v;
    const auto lo = std::min_element(v.begin(), v.end());
    const auto hi = std::max_element(v.begin(), v.end());
    const double t = rec.state.t;
    const double floor = env.sigma1 - traj.params.a * t - slack;
    // Residuals are signed distances past the bound; negative values are the remaining margin.
    wl.offer(lower, floor - *lo, 0.0, t, rec.state.eta(lo - v.begin()));
    const double ceil = env.B(t) + env.h_max() + slack;
    wu.offer(upper, *hi - ceil, 0.0, t, rec.state.eta(hi - v.begin()));
  }
  std::ostringstream os;
  os << "sigma1=" << env.sigma1 << " B0=" << env.B0 << " C5=" << env.C5;
  lower.detail = upper.detail = os.str();
  return {lower, upper};
}

InvariantEntry check_support_law(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  InvariantEntry e = entry("support_law", tol.support_law);
  const double l0 = traj.records.front().state.length();
  const double slope = 2.0 * traj.params.flux.c() - traj.params.a * traj.params.M;
  Worst w;
  for (const auto& rec : traj.records) {
    const double t = rec.state.t;
    const double r = std::abs(rec.state.length() - l0 - slope * t);
    w.offer(e, r, 2.0 * traj.eps_bc * t + tol.support_law, t);
  }
  return e;
}

InvariantEntry check_front_consistency(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  InvariantEntry e = entry("front_consistency", tol.front_consistency);
  Worst w;
  for (const auto& rec : traj.records) {
    const double t = rec.state.t;
    const double r = std::abs(rec.fronts.ell() - rec.state.length());
    w.offer(e, r, tol.front_consistency * (1.0 + t) + 2.0 * traj.eps_bc * t, t);
  }
  return e;
}

InvariantEntry check_center_identity(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  InvariantEntry e = entry("center_identity", tol.center_identity);
  Worst w;
  for (const auto& rec : traj.records) {
    const PhysicalSnapshot snap = reconstruct(rec.state, rec.fronts);
    const CenterDiagnostics d = center_diagnostics(snap, traj.params);
    const double limit = tol.center_identity * traj.params.M * (1.0 + std::abs(snap.sigma_plus));
    w.offer(e, d.identity_residual, limit, rec.state.t);
  }
  return e;
}

InvariantEntry check_center_drift_sign(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  InvariantEntry e = entry("center_drift_sign", 0.0);
  if (!(traj.params.a > 0.0)) {
    e.detail = "not applicable for a = 0 (the center does not drift)";
    return e;
  }
  int checked = 0, violations = 0;
  for (const auto& rec : traj.records) {
    const PhysicalSnapshot snap = reconstruct(rec.state, rec.fronts);
    const CenterDiagnostics d = center_diagnostics(snap, traj.params);
    const double gap = d.sigma_c - d.mass_center;
    if (std::abs(gap) <= tol.center_sign_threshold) continue;
    ++checked;
    if ((d.sigma_c_rate > 0.0) != (gap > 0.0)) {
      if (violations == 0) e.worst_t = rec.state.t;
      ++violations;
      e.passed = false;
    }
  }
  e.max_residual = violations;
  std::ostringstream os;
  os << violations << " sign mismatches over " << checked << " snapshots";
  e.detail = os.str();
  return e;
}

InvariantEntry check_positivity(const Trajectory& traj) {
  require_records(traj);
  InvariantEntry e = entry("positivity", 0.0);
  double vmin = std::numeric_limits<double>::infinity();
  for (const auto& rec : traj.records) {
    for (std::size_t i = 0; i < rec.state.size(); ++i) {
      if (rec.state.v[i] < vmin) {
        vmin = rec.state.v[i];
        e.worst_t = rec.state.t;
        e.worst_eta = rec.state.eta(i);
      }
    }
  }
  e.passed = vmin > 0.0;
  e.max_residual = std::max(0.0, -vmin);
  std::ostringstream os;
  os << "min v = " << vmin;
  e.detail = os.str();
  return e;
}

InvariantEntry check_monotone_reconstruction(const Trajectory& traj) {
  require_records(traj);
  InvariantEntry e = entry("monotone_reconstruction", 0.0);
  for (const auto& rec : traj.records) {
    const PhysicalSnapshot snap = reconstruct(rec.state, rec.fronts);
    for (std::size_t i = 0; i + 1 < snap.x.size(); ++i) {
      if (!(snap.x[i + 1] > snap.x[i])) {
        e.passed = false;
        e.max_residual = std::max(e.max_residual, snap.x[i] - snap.x[i + 1]);
        e.worst_t = rec.state.t;
        e.worst_eta = rec.state.eta(i);
      }
    }
  }
  return e;
}

InvariantEntry check_bv_finite(const Trajectory& traj) {
  require_records(traj);
  InvariantEntry e = entry("bv_finite", 0.0);
  for (const auto& rec : traj.records) {
    const double bv = bv_seminorm(rec.state);
    if (!std::isfinite(bv)) {
      e.passed = false;
      e.worst_t = rec.state.t;
    } else {
      e.max_residual = std::max(e.max_residual, bv);
    }
  }
  e.detail = "max BV seminorm over snapshots (monitor)";
  return e;
}

BlowupFit fit_blowup(const Trajectory& traj, const Tolerances& tol) {
  require_records(traj);
  BlowupFit fit;
  const double ell0 = traj.records.front().fronts.ell();
  const SupportForecast f = predict_support(traj.params, ell0);
  if (!f.t_star) return fit;
  fit.t_star = *f.t_star;
  if (traj.records.back().fronts.ell() > tol.blowup_reach * ell0 * (1.0 + 1e-9)) return fit;
  std::vector<double> t, ell;
  for (const auto& rec : traj.records) {
    t.push_back(rec.state.t);
    ell.push_back(rec.fronts.ell());
  }
  const LineFit line = least_squares_line(t, ell);
  fit.applicable = true;
  fit.t_fit = -line.intercept / line.slope;
  fit.rel_error = std::abs(fit.t_fit - fit.t_star) / fit.t_star;
  return fit;
}

InvariantEntry check_blowup_forecast(const Trajectory& traj, const Tolerances& tol) {
  InvariantEntry e = entry("blowup_forecast", tol.blowup_forecast);
  const BlowupFit fit = fit_blowup(traj, tol);
  if (!fit.applicable) {
    e.detail = "not applicable (not concentrating, or support not reduced enough)";
    return e;
  }
  e.max_residual = fit.rel_error;
  e.passed = fit.rel_error <= tol.blowup_forecast;
  e.worst_t = fit.t_fit;
  std::ostringstream os;
  os << "fitted zero crossing " << fit.t_fit << " vs T* = " << fit.t_star;
  e.detail = os.str();
  return e;
}

InvariantReport validate_trajectory(const Trajectory& traj, const Tolerances& tol) {
  InvariantReport rep;
  rep.entries.push_back(check_mass_law(traj, tol));
  for (auto& e : check_bounds(traj, make_envelope(traj, tol), tol)) rep.entries.push_back(std::move(e));
  rep.entries.push_back(check_support_law(traj, tol));
  rep.entries.push_back(check_front_consistency(traj, tol));
  rep.entries.push_back(check_center_identity(traj, tol));
  rep.entries.push_back(check_center_drift_sign(traj, tol));
  rep.entries.push_back(check_positivity(traj));
  rep.entries.push_back(check_monotone_reconstruction(traj));
  rep.entries.push_back(check_bv_finite(traj));
  rep.entries.push_back(check_blowup_forecast(traj, tol));
  return rep;
}

ObservedOrderReport convergence_study(const ModelParams& params, const SchemeConfig& base_config,
                                      const std::vector<int>& grids, double v_edge, const Tolerances& tol) {
  if (grids.size() < 3) throw ConfigError("convergence_study: need at least three grids", "grids");
  for (std::size_t k = 0; k + 1 < grids.size(); ++k) {
    if (grids[k + 1] != 2 * grids[k]) throw ConfigError("convergence_study: grids must double", "grids");
  }
  ObservedOrderReport rep;
  rep.grids = grids;
  for (int N : grids) {
    SchemeConfig cfg = base_config;
    cfg.N = N;
    const DualState init = steady_jump_profile(params, v_edge, N);
    const Trajectory traj = run(init, cfg);
    const DualState& last = traj.records.back().state;
    double emax = 0.0;
    CompensatedSum l1;
    for (std::size_t i = 0; i < last.size(); ++i) {
      const double d = std::abs(last.v[i] - init.v[i]);
      emax = std::max(emax, d);
      l1.add(d);
    }
    rep.errors.push_back(emax);
    rep.errors_l1.push_back(l1.value() * last.d_eta());
  }
  std::vector<double> logn, loge, loge1;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    logn.push_back(std::log(static_cast<double>(grids[k])));
    loge.push_back(std::log(rep.errors[k]));
    loge1.push_back(std::log(rep.errors_l1[k]));
    if (k > 0) {
      rep.orders.push_back(std::log2(rep.errors[k - 1] / rep.errors[k]));
      if (rep.errors[k] > (1.0 + tol.convergence_growth) * rep.errors[k - 1]) rep.monotone = false;
    }
  }
  rep.fitted_order = -least_squares_line(logn, loge).slope;
  rep.fitted_order_l1 = -least_squares_line(logn, loge1).slope;
  rep.passed = rep.monotone && rep.fitted_order >= tol.convergence_order;
  return rep;
}

}  // namespace satflux
