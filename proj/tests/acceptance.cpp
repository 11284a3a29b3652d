// Acceptance criteria, one per invocation: `satflux_acceptance <id>` with id in 1..10.
// Prints a single PASS/FAIL line and exits nonzero on failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "satflux/dual_solver.hpp"
#include "satflux/flux.hpp"
#include "satflux/fronts.hpp"
#include "satflux/validation.hpp"
#include "satflux/waves.hpp"

using namespace satflux;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

ModelParams params(double a, double m, double M) {
  ModelParams p;
  p.a = a;
  p.m = m;
  p.M = M;
  p.flux = FluxModel::classical(1.0, 1.0);
  return p;
}

SchemeConfig scheme(double t_end) {
  SchemeConfig cfg;
  cfg.N = 400;
  cfg.eps = 1e-3;
  cfg.t_end = t_end;
  cfg.snapshot_dt = 0.01;
  return cfg;
}

Trajectory spreading_run() { return run(params(1, 0, 1), scheme(1.0), [](double) { return 1.0; }); }

Trajectory blowup_run() {
  SchemeConfig cfg = scheme(0.6);
  cfg.support_floor = 0.1;
  return run(params(1, 0, 4), cfg, [](double) { return 0.25; });  // ℓ0 = M·v0 = 1
}

Trajectory jump_run() { return run(steady_jump_profile(params(1, 0, 2), 1.0, 400), scheme(1.0)); }

std::map<std::string, std::function<Trajectory()>> all_runs() {
  return {{"spread", spreading_run}, {"blowup", blowup_run}, {"jump", jump_run}};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double vmin_of(const DualState& s) { return *std::min_element(s.v.begin(), s.v.end()); }

Outcome criterion_1() {
  Outcome o{true, ""};
  for (const auto& [name, make] : all_runs()) {
    const Trajectory tr = make();
    double worst = 0.0;
    bool ok = true;
    for (const auto& r : tr.records) {
      const double res = std::abs(r.state.length() - tr.initial_length - tr.mass_slope() * r.diag.t);
      worst = std::max(worst, res);
      ok = ok && res <= 1e-10 * (1.0 + r.diag.t);
    }
    o.passed = o.passed && ok;
    o.detail += name + " max residual " + fmt(worst) + "; ";
  }
  return o;
}

Outcome criterion_2() {
  const Trajectory tr = spreading_run();
  const auto& last = tr.records.back();
  const double err = std::abs(last.fronts.ell() - 2.0);
  return {tr.reason == TerminationReason::reached_t_end && std::abs(last.diag.t - 1.0) < 1e-12 && err <= 0.04,
          "l(1) = " + fmt(last.fronts.ell()) + ", dual length " + fmt(last.state.length()) + ", |l(1) - 2| = " + fmt(err) +
              " (limit 0.04)"};
}

Outcome criterion_3() {
  const Trajectory tr = blowup_run();
  const BlowupFit fit = fit_blowup(tr);
  const double reached = tr.records.back().fronts.ell();
  const bool ok = reached <= 0.1 * (1 + 1e-12) && fit.applicable && fit.rel_error <= 0.05;
  return {ok, "stopped at t = " + fmt(tr.termination_time) + " with l = " + fmt(reached) + ", fitted zero " +
                  fmt(fit.t_fit) + " vs T* = " + fmt(fit.t_star) + ", rel. error " + fmt(fit.rel_error) + " (limit 0.05)"};
}

Outcome criterion_4() {
  const Trajectory tr = jump_run();
  const auto& v0 = tr.records.front().state.v;
  const auto& v1 = tr.records.back().state.v;
  double drift = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < v0.size(); ++i) {
    if (std::abs(v1[i] - v0[i]) > drift) {
      drift = std::abs(v1[i] - v0[i]);
      at = i;
    }
  }
  const RhSeries rh = rh_residual(tr);
  const bool reached = tr.reason == TerminationReason::reached_t_end;
  const bool ok = reached && drift <= 5e-3 && rh.max_minus() <= 1e-3 && rh.max_plus() <= 1e-3;
  return {ok, "max |v(1) - v(0)| = " + fmt(drift) + " at eta = " + fmt(tr.records.back().state.eta(at)) +
                  " (limit 5e-3); RH residuals " + fmt(rh.max_minus()) + ", " + fmt(rh.max_plus()) + " (limit 1e-3)"};
}

Outcome criterion_5() {
  const WaveProfile w = continuous_profile(params(1, 1, 1), 1.0, -0.5, 0.0, 2001);
  const double mid = profile_value(w, 0.5);
  const double ends = std::max(w.U.front(), w.U.back());
  const bool ok = std::abs(mid - 0.517638) <= 1e-6 && ends <= 1e-8 && std::abs(w.kappa_bar - 0.5) <= 1e-8 &&
                  std::abs(w.sigma) <= 1e-8 && w.ode_residual <= 1e-6;
  std::ostringstream os;
  os.precision(9);
  os << "U(1/2) = " << mid << ", end values " << ends << ", kappa_bar = " << w.kappa_bar << ", sigma = " << w.sigma
     << ", ODE residual " << w.ode_residual;
  return {ok, os.str()};
}

Outcome criterion_6() {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  double g_err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double u = -1.0 + 2.0 * k / 999.0;
    g_err = std::max(g_err, std::abs(f.G_by_quadrature(u) - f.G(u)));
  }
  double rt = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double y = -1e3 + 2e3 * k / 999.0;
    rt = std::max(rt, std::abs(f.g(f.phi(y)) - y) / std::max(1.0, std::abs(y)));
  }
  return {g_err <= 1e-10 && rt <= 1e-8, "quadrature vs closed G " + fmt(g_err) + " (limit 1e-10); g(phi(y)) round trip " +
                                            fmt(rt) + " (limit 1e-8)"};
}

// Symmetric data keep the two centers together, so the sign comparison needs a lopsided start.
Trajectory ramp_run() { return run(params(1, 0, 1), scheme(0.5), [](double e) { return 0.5 + e; }); }

Outcome criterion_7() {
  Outcome o{true, ""};
  auto runs = all_runs();
  runs["ramp"] = ramp_run;
  int compared = 0;
  for (const auto& [name, make] : runs) {
    const Trajectory tr = make();
    const double M = tr.params.M;
    double worst = 0.0;
    int sign_checked = 0, sign_bad = 0;
    bool ok = true;
    for (const auto& r : tr.records) {
      const PhysicalSnapshot s = reconstruct(r.state, r.fronts);
      const CenterDiagnostics d = center_diagnostics(s, tr.params);
      const double scale = 1e-6 * M * (1.0 + std::abs(s.sigma_plus));
      worst = std::max(worst, d.identity_residual / scale);
      ok = ok && d.identity_residual <= scale;
      const double gap = d.sigma_c - d.mass_center;
      if (std::abs(gap) > 1e-6 && tr.params.a > 0.0) {
        ++sign_checked;
        if ((d.sigma_c_rate > 0.0) != (gap > 0.0)) ++sign_bad;
      }
    }
    o.passed = o.passed && ok && sign_bad == 0;
    compared += sign_checked;
    o.detail += name + " identity/limit " + fmt(worst) + ", sign " + std::to_string(sign_checked - sign_bad) + "/" +
                std::to_string(sign_checked) + "; ";
  }
  o.passed = o.passed && compared > 0;
  return o;
}

Outcome criterion_8() {
  Outcome o{true, ""};
  for (const auto& [name, make] : all_runs()) {
    const Trajectory tr = make();
    const double v0min = vmin_of(tr.records.front().state);
    double margin = INFINITY;
    for (const auto& r : tr.records) {
      margin = std::min(margin, vmin_of(r.state) - (v0min - tr.params.a * r.diag.t - 10.0 * r.state.d_eta()));
    }
    bool ok = margin >= 0.0;
    if (name == "spread") {
      const double horizon = 0.9 * v0min / tr.params.a;
      const bool early_loss = tr.reason == TerminationReason::positivity_loss && tr.termination_time < horizon;
      ok = ok && !early_loss;
      o.detail += "spread ends " + std::string(to_string(tr.reason)) + " at t = " + fmt(tr.termination_time) + "; ";
    }
    o.passed = o.passed && ok;
    o.detail += name + " lower-bound margin " + fmt(margin) + "; ";
  }
  return o;
}

Outcome criterion_9() {
  SchemeConfig cfg;
  cfg.t_end = 1.0;
  cfg.snapshot_dt = 0.01;
  const ObservedOrderReport r = convergence_study(params(1, 0, 2), cfg, {100, 200, 400});
  std::string errs;
  for (std::size_t k = 0; k < r.grids.size(); ++k)
    errs += "N=" + std::to_string(r.grids[k]) + ": " + fmt(r.errors[k]) + " ";
  return {r.passed, "errors " + errs + "fitted order " + fmt(r.fitted_order) + " (need 0.8), L1 order " +
                        fmt(r.fitted_order_l1)};
}

Outcome criterion_10() {
  const HypothesisReport builtin = validate_hypotheses(FluxModel::classical(1.0, 1.0), 256, 1e4);
  const FluxModel linear = FluxModel::custom([](double y) { return y; }, [](double) { return 1.0; }, 1.0, 2.0, 0.5, "linear");
  const FluxModel shifted = FluxModel::custom([](double y) { return y / std::sqrt(1.0 + y * y) + 0.1; },
                                              [](double y) { return std::pow(1.0 + y * y, -1.5); }, 1.0, 2.0, 0.5, "shifted");
  const bool lin_rejected = !validate_hypotheses(linear, 256, 1e4).all_passed();
  const bool odd_rejected = !validate_hypotheses(shifted, 256, 1e4).at("oddness").passed;
  return {builtin.all_passed() && lin_rejected && odd_rejected,
          std::string("built-in ") + (builtin.all_passed() ? "accepted" : "rejected") + ", linear " +
              (lin_rejected ? "rejected" : "accepted") + ", shifted " + (odd_rejected ? "rejected" : "accepted")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"discrete mass law", criterion_1}},
      {2, {"support law", criterion_2}},
      {3, {"blow-up forecast", criterion_3}},
      {4, {"steady jump wave", criterion_4}},
      {5, {"continuous entropic wave", criterion_5}},
      {6, {"G calculus", criterion_6}},
      {7, {"center-of-mass identity", criterion_7}},
      {8, {"envelope bounds", criterion_8}},
      {9, {"convergence order", criterion_9}},
      {10, {"hypothesis validator", criterion_10}},
  };
  std::vector<int> ids;
  if (argc < 2 || std::string(argv[1]) == "all") {
    for (const auto& [id, _] : criteria) ids.push_back(id);
  } else {
    for (int k = 1; k < argc; ++k) ids.push_back(std::stoi(argv[k]));
  }
  bool all = true;
  for (int id : ids) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::printf("criterion %d: unknown\n", id);
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s - %s\n", id, it->second.first.c_str(), o.passed ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
