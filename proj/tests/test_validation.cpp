#include <doctest.h>

#include <cmath>

#include "satflux/dual_solver.hpp"
#include "satflux/errors.hpp"
#include "satflux/validation.hpp"

using namespace satflux;

namespace {

Trajectory small_run(double M, double v0, double t_end) {
  ModelParams p;
  p.M = M;
  SchemeConfig cfg;
  cfg.N = 64;
  cfg.eps = 1e-3;
  cfg.t_end = t_end;
  cfg.snapshot_dt = 0.01;
  return run(p, cfg, [v0](double) { return v0; });
}

}  // namespace

TEST_CASE("a reference run passes every invariant") {
  const Trajectory tr = small_run(1.0, 1.0, 0.3);
  const InvariantReport rep = validate_trajectory(tr);
  for (const auto& e : rep.entries) {
    INFO(e.name << " residual " << e.max_residual << " tol " << e.tolerance << " " << e.detail);
    CHECK(e.passed);
  }
  CHECK(rep.all_passed());
  CHECK(rep.at("mass_law").max_residual <= 1e-10);
  // Pure function of the trajectory.
  const InvariantReport again = validate_trajectory(tr);
  REQUIRE(again.entries.size() == rep.entries.size());
  for (std::size_t k = 0; k < rep.entries.size(); ++k) CHECK(again.entries[k].max_residual == rep.entries[k].max_residual);
}

TEST_CASE("tampered trajectory fails the mass law at the right place") {
  Trajectory tr = small_run(1.0, 1.0, 0.1);
  const std::size_t k = 5;
  tr.records[k].state.v[17] += 1e-6;
  const InvariantEntry e = check_mass_law(tr);
  CHECK_FALSE(e.passed);
  CHECK(e.worst_t == doctest::Approx(tr.records[k].diag.t));
  CHECK(e.max_residual == doctest::Approx(1e-6 / 64.0).epsilon(1e-3));
  CHECK_FALSE(validate_trajectory(tr).all_passed());
}

TEST_CASE("bounds hold with nonnegative slack at t = 0") {
  const Trajectory tr = small_run(1.0, 1.0, 0.2);
  const EnvelopeParams env = make_envelope(tr);
  CHECK(env.B0 >= 1.0);
  for (double h : env.h) CHECK(h <= 0.0);
  Trajectory first = tr;
  first.records.resize(1);
  for (const auto& e : check_bounds(first, env)) {
    CHECK(e.passed);
    CHECK(e.max_residual <= 0.0);
  }
  // The lower envelope 1 − t holds until termination.
  for (const auto& r : tr.records) {
    const double vmin = *std::min_element(r.state.v.begin(), r.state.v.end());
    CHECK(vmin >= 1.0 - r.diag.t - 10.0 * r.state.d_eta());
  }
}

TEST_CASE("bv seminorm") {
  ModelParams p;
  CHECK(bv_seminorm(sample_state(p, 50, [](double) { return 3.0; })) == 0.0);
  const DualState ramp = sample_state(p, 400, [](double e) { return 1.0 + e; });
  CHECK(bv_seminorm(ramp) == doctest::Approx(ramp.v.back() - ramp.v.front()).epsilon(1e-12));
  CHECK(bv_seminorm(ramp) == doctest::Approx(1.0).epsilon(1e-2));
  const DualState bump = sample_state(p, 400, [](double e) { return 2.0 - std::abs(e - 0.5); });
  CHECK(bv_seminorm(bump) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("blow-up forecast on a supercritical run") {
  ModelParams p;
  p.M = 4.0;
  SchemeConfig cfg;
  cfg.N = 64;
  cfg.eps = 1e-3;
  cfg.t_end = 0.6;
  cfg.support_floor = 0.1;
  const Trajectory tr = run(p, cfg, [](double) { return 0.25; });
  const BlowupFit fit = fit_blowup(tr);
  CHECK(fit.applicable);
  CHECK(fit.t_star == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.rel_error <= 0.05);
  CHECK(check_blowup_forecast(tr).passed);
}

TEST_CASE("forecast is vacuous for spreading runs") {
  const Trajectory tr = small_run(1.0, 1.0, 0.05);
  CHECK_FALSE(fit_blowup(tr).applicable);
  CHECK(check_blowup_forecast(tr).passed);
}

TEST_CASE("convergence study configuration errors") {
  ModelParams p;
  p.M = 2.0;
  SchemeConfig cfg;
  cfg.t_end = 0.01;
  CHECK_THROWS_AS(convergence_study(p, cfg, {100, 100, 200}), ConfigError);
  CHECK_THROWS_AS(convergence_study(p, cfg, {100, 200}), ConfigError);
  CHECK_THROWS_AS(convergence_study(p, cfg, {100, 300, 600}), ConfigError);
}

TEST_CASE("convergence study reports one error per grid") {
  ModelParams p;
  p.M = 2.0;
  SchemeConfig cfg;
  cfg.t_end = 0.02;
  cfg.snapshot_dt = 0.01;
  const ObservedOrderReport r = convergence_study(p, cfg, {25, 50, 100});
  CHECK(r.grids == std::vector<int>{25, 50, 100});
  CHECK(r.errors.size() == 3);
  CHECK(r.errors_l1.size() == 3);
  CHECK(r.orders.size() == 2);
  for (double e : r.errors) CHECK(std::isfinite(e));
}
