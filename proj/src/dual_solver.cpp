#include "satflux/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "satflux/errors.hpp"
#include "satflux/fronts.hpp"
#include "satflux/numerics.hpp"
#include "satflux/validation.hpp"

namespace satflux {

void ModelParams::validate() const {
  if (!std::isfinite(a) || a < 0.0) throw ParameterError("model: a must be finite and >= 0");
  if (!std::isfinite(m) || m < 0.0) throw ParameterError("model: m must be finite and >= 0");
  if (!std::isfinite(M) || !(M > 0.0)) throw ParameterError("model: M must be positive");
}

const char* to_string(InterfaceMean mean) {
  switch (mean) {
    case InterfaceMean::arithmetic: return "arithmetic";
    case InterfaceMean::geometric: return "geometric";
    case InterfaceMean::harmonic: return "harmonic";
  }
  return "arithmetic";
}

InterfaceMean interface_mean_from_string(const std::string& name) {
  if (name == "arithmetic") return InterfaceMean::arithmetic;
  if (name == "geometric") return InterfaceMean::geometric;
  if (name == "harmonic") return InterfaceMean::harmonic;
  throw ParameterError("unknown interface mean '" + name + "'");
}

void SchemeConfig::validate() const {
  if (N < 8) throw ParameterError("scheme: N must be >= 8");
  if (eps && !(*eps > 0.0 && std::isfinite(*eps))) throw ParameterError("scheme: eps must be positive");
  if (!(kappa_bc > 0.0) || !std::isfinite(kappa_bc)) throw ParameterError("scheme: kappa_bc must be positive");
  if (!(lambda_env > 0.0) || !std::isfinite(lambda_env)) throw ParameterError("scheme: lambda_env must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ParameterError("scheme: cfl must be in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("scheme: t_end must be positive");
  if (!(snapshot_dt > 0.0) || !std::isfinite(snapshot_dt)) throw ParameterError("scheme: snapshot_dt must be positive");
  if (!(support_floor >= 0.0 && support_floor < 1.0)) throw ParameterError("scheme: support_floor must be in [0, 1)");
  if (max_steps <= 0) throw ParameterError("scheme: max_steps must be positive");
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::reached_t_end: return "reached_t_end";
    case TerminationReason::positivity_loss: return "positivity_loss";
    case TerminationReason::blowup_threshold: return "blowup_threshold";
    case TerminationReason::step_limit: return "step_limit";
  }
  return "reached_t_end";
}

TerminationReason termination_from_string(const std::string& name) {
  if (name == "reached_t_end") return TerminationReason::reached_t_end;
  if (name == "positivity_loss") return TerminationReason::positivity_loss;
  if (name == "blowup_threshold") return TerminationReason::blowup_threshold;
  if (name == "step_limit") return TerminationReason::step_limit;
  throw ParameterError("unknown termination reason '" + name + "'");
}

double DualState::length() const { return d_eta() * compensated_sum(v); }

namespace {

double interface_value(double vl, double vr, InterfaceMean mean) {
  switch (mean) {
    case InterfaceMean::geometric: return std::sqrt(vl * vr);
    case InterfaceMean::harmonic: return 2.0 * vl * vr / (vl + vr);
    case InterfaceMean::arithmetic: break;
  }
  return 0.5 * (vl + vr);
}

double boundary_deficit(const ModelParams& params, double eps, double kappa_bc) {
  const double d = std::pow(eps, kappa_bc);
  if (!(d < params.flux.c())) {
    throw ParameterError("eps^kappa_bc must be below c for the boundary flux to keep its sign");
  }
  return d;
}

}  // namespace

double CompatibleInitial::operator()(double eta) const {
  if (eta <= delta_left) return v0(delta_left) + B * (delta_left - eta);
  if (eta >= M - delta_right) return v0(M - delta_right) + B * (eta - (M - delta_right));
  return v0(eta);
}

DualState CompatibleInitial::to_state(const ModelParams& params, int N) const {
  return sample_state(params, N, [this](double eta) { return (*this)(eta); });
}

CompatibleInitial compatibilize_initial(const ModelParams& params, Sampler v0, double eps, double kappa_bc,
                                        double delta0) {
  params.validate();
  if (!v0) throw ParameterError("compatibilize_initial: sampler is empty");
  if (!(eps > 0.0)) throw ParameterError("compatibilize_initial: eps must be positive");
  if (!(kappa_bc > 0.0)) throw ParameterError("compatibilize_initial: kappa_bc must be positive");
  if (!(delta0 > 0.0 && delta0 < 0.5 * params.M)) {
    throw ParameterError("compatibilize_initial: delta0 must lie in (0, M/2)");
  }
  const FluxModel& flux = params.flux;
  const double target = flux.c() - boundary_deficit(params, eps, kappa_bc);
  const double B = target / (2.0 * eps);
  const double p = 2.0 + params.m;

  auto residual_eq = [&](double v_at_end) { return flux.phi(B / std::pow(v_at_end, p)) + eps * B - target; };

  auto solve_end = [&](auto&& v0_at, const char* side) {
    auto F = [&](double delta) { return residual_eq(v0_at(delta) + delta * B); };
    const double f0 = residual_eq(v0_at(0.0));
    const double f1 = F(delta0);
    if (!(f0 > 0.0) || !(f1 < 0.0)) {
      std::ostringstream os;
      os << "no boundary-layer width in (0, " << delta0 << "] at the " << side << " end for eps=" << eps
         << " (residual " << f0 << " at 0, " << f1 << " at delta0); try a smaller eps or a larger delta0";
      throw CompatibilityError(os.str());
    }
    double lo = 0.0, hi = delta0;
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (F(mid) > 0.0 ? lo : hi) = mid;
    }
    return (std::abs(F(lo)) < std::abs(F(hi))) ? lo : hi;
  };

  for (double eta : {0.0, 0.25 * params.M, 0.5 * params.M, 0.75 * params.M, params.M}) {
    const double val = v0(eta);
    if (!(val > 0.0) || !std::isfinite(val)) throw ParameterError("compatibilize_initial: v0 must be positive");
  }

  CompatibleInitial out;
  out.v0 = v0;
  out.M = params.M;
  out.eps = eps;
  out.kappa_bc = kappa_bc;
  out.B = B;
  out.delta_left = solve_end([&](double d) { return v0(d); }, "left");
  out.delta_right = solve_end([&](double d) { return v0(params.M - d); }, "right");

  const double vl = v0(out.delta_left) + out.delta_left * B;
  const double vr = v0(params.M - out.delta_right) + out.delta_right * B;
  out.residual_left = std::abs(flux.phi(-B / std::pow(vl, p)) - eps * B + target);
  out.residual_right = std::abs(flux.phi(B / std::pow(vr, p)) + eps * B - target);
  return out;
}

DualState sample_state(const ModelParams& params, int N, const Sampler& v0) {
  params.validate();
  if (N < 8) throw ParameterError("N must be >= 8");
  DualState s;
  s.params = params;
  s.v.resize(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    const double val = v0(s.eta(i));
    if (!(val > 0.0) || !std::isfinite(val)) {
      std::ostringstream os;
      os << "initial datum must be positive and finite (v0(" << s.eta(i) << ") = " << val << ")";
      throw ParameterError(os.str());
    }
    s.v[i] = val;
  }
  return s;
}

double numerical_flux(const DualState& state, std::size_t face, double eps, double kappa_bc, InterfaceMean mean) {
  const std::size_t N = state.size();
  if (face > N) throw ParameterError("numerical_flux: interface index out of range");
  const double c = state.params.flux.c();
  if (face == 0) return -(c - std::pow(eps, kappa_bc));
  if (face == N) return c - std::pow(eps, kappa_bc);
  const double vl = state.v[face - 1];
  const double vr = state.v[face];
  const double s = (vr - vl) / state.d_eta();
  const double vt = interface_value(vl, vr, mean);
  return state.params.flux.phi(s / fast_pow(vt, 2.0 + state.params.m)) + eps * s;
}

DualStepper::DualStepper(const ModelParams& params, const SchemeConfig& config)
    : params_(params), config_(config), d_eta_(params.M / config.N) {
  params_.validate();
  config_.validate();
  eps_ = config_.eps_for(params_.M);
  eps_bc_ = boundary_deficit(params_, eps_, config_.kappa_bc);
  phi_prime0_ = params_.flux.dphi(0.0);
  classical_ = params_.flux.closed_form();
  if (classical_) {
    nu_ = *params_.flux.nu();
    nu_over_c_ = nu_ / params_.flux.c();
  }
  flux_.assign(static_cast<std::size_t>(config_.N) + 1, 0.0);
}

double DualStepper::flux_at(double vl, double vr) const {
  const double s = (vr - vl) / d_eta_;
  const double vt = interface_value(vl, vr, config_.mean);
  const double y = s / fast_pow(vt, 2.0 + params_.m);
  double phi;
  if (classical_) {
    phi = nu_ * y / std::hypot(1.0, nu_over_c_ * y);
  } else {
    phi = params_.flux.phi(y);
  }
  return phi + eps_ * s;
}

double DualStepper::stable_dt(const std::vector<double>& v) const {
  double vmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    vmin = std::min(vmin, interface_value(v[i], v[i + 1], config_.mean));
  }
  const double d_max = phi_prime0_ / fast_pow(vmin, 2.0 + params_.m) + eps_;
  return config_.cfl * d_eta_ * d_eta_ / (2.0 * d_max);
}

long DualStepper::advance(std::vector<double>& v, double dt) {
  const std::size_t N = v.size();
  const double cb = params_.flux.c() - eps_bc_;
  flux_[0] = -cb;
  flux_[N] = cb;
  for (std::size_t i = 1; i < N; ++i) flux_[i] = flux_at(v[i - 1], v[i]);
  const double r = dt / d_eta_;
  const double sink = params_.a * dt;
  long bad = -1;
  for (std::size_t i = 0; i < N; ++i) {
    v[i] += r * (flux_[i + 1] - flux_[i]) - sink;
    if (bad < 0 && !(v[i] > 0.0)) bad = static_cast<long>(i);
  }
  return bad;
}

double stable_time_step(const DualState& state, const SchemeConfig& config) {
  SchemeConfig cfg = config;
  cfg.N = static_cast<int>(state.size());
  return DualStepper(state.params, cfg).stable_dt(state.v);
}

DualState step(const DualState& state, const SchemeConfig& config) {
  SchemeConfig cfg = config;
  cfg.N = static_cast<int>(state.size());
  DualStepper stepper(state.params, cfg);
  DualState next = state;
  const double dt = stepper.stable_dt(next.v);
  const long bad = stepper.advance(next.v, dt);
  next.t = state.t + dt;
  if (bad >= 0) throw PositivityLoss(next.t, static_cast<std::size_t>(bad));
  return next;
}

namespace {

DiagnosticsRow make_row(const DualState& state, const FrontState& fronts, double initial_length, double slope) {
  const PhysicalSnapshot snap = reconstruct(state, fronts);
  DiagnosticsRow row;
  row.t = state.t;
  row.sigma_minus = fronts.sigma_minus;
  row.sigma_plus = fronts.sigma_plus;
  row.ell = fronts.ell();
  row.mu_bar = snap.mu_bar;
  row.sigma_c = snap.sigma_c;
  row.mass_center = snap.mass_center;
  const auto [lo, hi] = std::minmax_element(state.v.begin(), state.v.end());
  row.vmin = *lo;
  row.vmax = *hi;
  row.mass_law_residual = state.length() - initial_length - slope * state.t;
  row.bv_seminorm = bv_seminorm(state);
  row.rh_minus = std::numeric_limits<double>::quiet_NaN();
  row.rh_plus = std::numeric_limits<double>::quiet_NaN();
  return row;
}

}  // namespace

Trajectory run(const DualState& initial, const SchemeConfig& config, double sigma_minus0) {
  config.validate();
  initial.params.validate();
  if (static_cast<int>(initial.size()) != config.N) {
    throw ParameterError("run: initial state size does not match config.N");
  }
  for (double x : initial.v) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("run: initial state must be positive");
  }

  DualStepper stepper(initial.params, config);
  Trajectory traj;
  traj.params = initial.params;
  traj.config = config;
  traj.eps = stepper.eps();
  traj.eps_bc = stepper.eps_bc();
  traj.initial_length = initial.length();
  const double slope = traj.mass_slope();

  DualState state = initial;
  state.t = 0.0;
  FrontState fronts{0.0, sigma_minus0, sigma_minus0 + traj.initial_length};
  const double ell_floor = config.support_floor * fronts.ell();

  auto record = [&]() { traj.records.push_back({state, fronts, make_row(state, fronts, traj.initial_length, slope)}); };
  record();

  CompensatedSum clock;
  long long k_snap = 1;
  auto target_time = [&]() { return std::min(config.t_end, static_cast<double>(k_snap) * config.snapshot_dt); };
  double t_target = target_time();

  std::vector<double>& v = state.v;
  while (true) {
    if (traj.steps >= config.max_steps) {
      traj.reason = TerminationReason::step_limit;
      traj.termination_time = state.t;
      traj.detail = "step limit reached";
      break;
    }
    double dt = stepper.stable_dt(v);
    bool hit = false;
    if (state.t + dt >= t_target) {
      dt = t_target - state.t;
      hit = true;
    }
    const double mb = mu_bar(state);
    const long bad = stepper.advance(v, dt);
    ++traj.steps;
    // Snapshot times land exactly on the cadence; in between the clock is compensated.
    if (hit) {
      clock = CompensatedSum{};
      clock.add(t_target);
    } else {
      clock.add(dt);
    }
    const double t_new = clock.value();
    if (bad >= 0) {
      traj.reason = TerminationReason::positivity_loss;
      traj.termination_time = t_new;
      traj.detail = PositivityLoss(t_new, static_cast<std::size_t>(bad)).what();
      break;
    }
    state.t = t_new;
    try {
      fronts = advance_fronts(fronts, mb, state.params, dt);
    } catch (const SupportCollapse& e) {
      traj.reason = TerminationReason::blowup_threshold;
      traj.termination_time = t_new;
      traj.detail = e.what();
      break;
    }
    fronts.t = t_new;
    if (fronts.ell() <= ell_floor) {
      record();
      traj.reason = TerminationReason::blowup_threshold;
      traj.termination_time = t_new;
      std::ostringstream os;
      os << "support length " << fronts.ell() << " below floor " << ell_floor;
      traj.detail = os.str();
      break;
    }
    if (hit) {
      record();
      if (t_target >= config.t_end) {
        traj.reason = TerminationReason::reached_t_end;
        traj.termination_time = t_new;
        break;
      }
      ++k_snap;
      t_target = target_time();
    }
  }
  fill_rh_residuals(traj);
  return traj;
}

Trajectory run(const ModelParams& params, const SchemeConfig& config, const Sampler& v0, double sigma_minus0) {
  config.validate();
  return run(sample_state(params, config.N, v0), config, sigma_minus0);
}

DualState steady_jump_profile(const ModelParams& params, double v_edge, int N) {
  params.validate();
  const double c = params.flux.c();
  if (std::abs(params.a * params.M - 2.0 * c) > 1e-12 * c) {
    std::ostringstream os;
    os << "a steady jump profile needs aM = 2c (aM = " << params.a * params.M << ", 2c = " << 2.0 * c << ")";
    throw NoSteadyStateError(os.str());
  }
  if (v_edge == 0.0) throw DegenerateProfileError("v_edge = 0 makes v unbounded at the ends");
  if (!(v_edge > 0.0) || !std::isfinite(v_edge)) throw ParameterError("v_edge must be positive");
  const double mp1 = params.m + 1.0;
  const double base = std::pow(v_edge, mp1);
  return sample_state(params, N, [&](double eta) {
    const double w = base + (mp1 / params.a) * params.flux.G_difference(c, c - params.a * eta);
    return 1.0 / std::pow(w, 1.0 / mp1);
  });
}

}  // namespace satflux
