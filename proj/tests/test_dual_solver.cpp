#include <doctest.h>

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numeric>

#include "satflux/dual_solver.hpp"
#include "satflux/errors.hpp"
#include "satflux/fronts.hpp"

using namespace satflux;

namespace {

ModelParams make_params(double a, double m, double M) {
  ModelParams p;
  p.a = a;
  p.m = m;
  p.M = M;
  p.flux = FluxModel::classical(1.0, 1.0);
  return p;
}

SchemeConfig make_config(int N, double eps) {
  SchemeConfig cfg;
  cfg.N = N;
  cfg.eps = eps;
  return cfg;
}

double total(const DualState& s) { return s.d_eta() * std::accumulate(s.v.begin(), s.v.end(), 0.0); }

}  // namespace

TEST_CASE("compatibilization: stated example has no root below delta0 = 0.1") {
  const ModelParams p = make_params(1.0, 0.0, 2.0);
  CHECK_THROWS_AS(compatibilize_initial(p, [](double) { return 1.0; }, 1e-3, 1.0 / 12.0, 0.1), CompatibilityError);
}

TEST_CASE("compatibilization: ramp matches an independent bisection of the boundary equation") {
  const ModelParams p = make_params(1.0, 0.0, 2.0);
  const double eps = 1e-3, kap = 1.0 / 12.0;
  const CompatibleInitial ci = compatibilize_initial(p, [](double) { return 1.0; }, eps, kap, 0.2);
  const double B = (1.0 - std::pow(eps, kap)) / (2.0 * eps);
  CHECK(ci.B == doctest::Approx(B).epsilon(1e-14));

  // At η = 0 the ramp has v = 1 + Bδ and slope −B; the boundary condition reads
  // Φ(−B/v²) − εB = −(c − ε^κ).
  auto F = [&](double d) {
    const double v = 1.0 + B * d;
    return -B / std::sqrt(v * v * v * v + B * B) - eps * B + (1.0 - std::pow(eps, kap));
  };
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto [lo, hi] = boost::math::tools::bisect(F, 1e-6, 0.2, tol);
  const double oracle = 0.5 * (lo + hi);
  CHECK(ci.delta_left == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(ci.delta_left == doctest::Approx(0.138).epsilon(0.01));
  CHECK(ci.delta_right == doctest::Approx(ci.delta_left).epsilon(1e-12));
  CHECK(ci.residual_left <= 1e-8);
  CHECK(ci.residual_right <= 1e-8);

  for (double eta = 0.2; eta <= 1.8; eta += 0.01) CHECK(ci(eta) == 1.0);
  CHECK(ci(0.0) == doctest::Approx(1.0 + B * ci.delta_left).epsilon(1e-14));
  CHECK(ci(2.0) == doctest::Approx(ci(0.0)).epsilon(1e-14));
  CHECK(ci(0.05) - ci(0.06) == doctest::Approx(0.01 * B).epsilon(1e-9));
}

TEST_CASE("compatibilization: B grows without bound as eps shrinks") {
  const ModelParams p = make_params(1.0, 0.0, 2.0);
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double kap = 1.0 / 12.0;
    const double B = (1.0 - std::pow(eps, kap)) / (2.0 * eps);
    CHECK(B > prev);
    prev = B;
  }
  const CompatibleInitial ci = compatibilize_initial(p, [](double) { return 1.0; }, 1e-4, 3.0, 0.2);
  CHECK(ci.residual_left <= 1e-8);
  CHECK_THROWS_AS(compatibilize_initial(p, [](double) { return 1.0; }, 1e-3, 3.0, 1.5), ParameterError);
}

TEST_CASE("numerical flux") {
  const ModelParams p = make_params(1.0, 0.0, 1.0);
  const int N = 100;
  const double eps = 1e-3, kap = 3.0;
  DualState s = sample_state(p, N, [](double) { return 1.0; });
  CHECK(numerical_flux(s, 50, eps, kap) == 0.0);
  CHECK(numerical_flux(s, 0, eps, kap) == -(1.0 - std::pow(eps, kap)));
  CHECK(numerical_flux(s, N, eps, kap) == 1.0 - std::pow(eps, kap));

  const double h = s.d_eta();
  s.v[10] = 1.0;
  s.v[11] = 1.0 + h;
  const double vt = 1.0 + 0.5 * h;
  const double expected = std::sqrt(0.5) * 0.0 + (1.0 / (vt * vt)) / std::sqrt(1.0 + 1.0 / (vt * vt * vt * vt)) + eps;
  CHECK(numerical_flux(s, 11, eps, kap) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(std::abs(numerical_flux(s, 11, eps, kap) - (1.0 / std::sqrt(2.0) + eps)) < 2 * h);
}

TEST_CASE("one step: interior update and exact mass change") {
  const ModelParams p = make_params(1.0, 0.0, 1.0);
  SchemeConfig cfg = make_config(100, 1e-3);
  const DualState s0 = sample_state(p, cfg.N, [](double) { return 1.0; });
  const double dt = stable_time_step(s0, cfg);
  // D_max = Φ'(0)/1 + ε for a uniform state.
  CHECK(dt == doctest::Approx(cfg.cfl * s0.d_eta() * s0.d_eta() / (2.0 * (1.0 + 1e-3))).epsilon(1e-14));
  const DualState s1 = step(s0, cfg);
  CHECK(s1.t == dt);
  for (int i = 1; i + 1 < cfg.N; ++i) CHECK(s1.v[i] == doctest::Approx(1.0 - dt).epsilon(1e-15));
  const double eps_bc = std::pow(1e-3, cfg.kappa_bc);
  CHECK(std::abs((total(s1) - total(s0)) - dt * (2.0 * (1.0 - eps_bc) - 1.0)) <= 1e-15);
}

TEST_CASE("one step on a non-uniform state keeps the telescoping mass change") {
  const ModelParams p = make_params(2.0, 1.0, 1.5);
  SchemeConfig cfg = make_config(64, 1e-2);
  cfg.kappa_bc = 1.0 / 12.0;
  const DualState s0 = sample_state(p, cfg.N, [](double e) { return 1.0 + 0.3 * std::sin(5.0 * e); });
  const DualState s1 = step(s0, cfg);
  const double eps_bc = std::pow(1e-2, 1.0 / 12.0);
  CHECK(std::abs((total(s1) - total(s0)) - s1.t * (2.0 * (1.0 - eps_bc) - 3.0)) <= 1e-14);
}

TEST_CASE("steady jump profile") {
  const ModelParams p = make_params(1.0, 0.0, 2.0);
  const DualState s = steady_jump_profile(p, 1.0, 400);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double eta = s.eta(i);
    CHECK(s.v[i] == doctest::Approx(1.0 / (1.0 + std::sqrt(eta * (2.0 - eta)))).epsilon(1e-13));
    CHECK(s.v[i] == doctest::Approx(s.v[s.size() - 1 - i]).epsilon(1e-12));
  }
  const DualState odd = steady_jump_profile(p, 1.0, 401);
  CHECK(odd.v[200] == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(steady_jump_profile(make_params(1.0, 0.0, 3.0), 1.0, 400), NoSteadyStateError);
  CHECK_THROWS_AS(steady_jump_profile(p, 0.0, 400), DegenerateProfileError);
  CHECK_THROWS_AS(steady_jump_profile(p, -1.0, 400), ParameterError);
}

TEST_CASE("steady jump profile is close to a fixed point away from the boundary cells") {
  const ModelParams p = make_params(1.0, 0.0, 2.0);
  const SchemeConfig cfg = make_config(400, 1e-3);
  const DualState s = steady_jump_profile(p, 1.0, cfg.N);
  const double eps_bc = std::pow(1e-3, cfg.kappa_bc);
  double interior = 0.0;
  for (int i = 1; i + 1 < cfg.N; ++i) {
    const double rate = (numerical_flux(s, i + 1, 1e-3, cfg.kappa_bc) - numerical_flux(s, i, 1e-3, cfg.kappa_bc)) / s.d_eta() - p.a;
    interior = std::max(interior, std::abs(rate) * stable_time_step(s, cfg));
  }
  MESSAGE("interior per-step update " << interior << " eps_bc " << eps_bc);
  CHECK(interior <= 1e-3);
}

TEST_CASE("run: spreading support grows and the run is deterministic") {
  const ModelParams p = make_params(1.0, 0.0, 1.0);
  SchemeConfig cfg = make_config(100, 1e-3);
  cfg.t_end = 0.2;
  cfg.snapshot_dt = 0.05;
  const Trajectory a = run(p, cfg, [](double) { return 1.0; });
  const Trajectory b = run(p, cfg, [](double) { return 1.0; });
  CHECK(a.reason == TerminationReason::reached_t_end);
  REQUIRE(a.records.size() == 5);
  for (std::size_t k = 1; k < a.records.size(); ++k) {
    CHECK(a.records[k].diag.t > a.records[k - 1].diag.t);
    CHECK(a.records[k].fronts.ell() > a.records[k - 1].fronts.ell());
    CHECK(a.records[k].diag.t == doctest::Approx(0.05 * k).epsilon(1e-15));
  }
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].state.v == b.records[k].state.v);
    CHECK(a.records[k].fronts.sigma_plus == b.records[k].fronts.sigma_plus);
  }
  CHECK(a.steps == b.steps);
  for (const auto& r : a.records) {
    const double vmin = *std::min_element(r.state.v.begin(), r.state.v.end());
    CHECK(vmin >= 1.0 - r.diag.t - 10.0 * r.state.d_eta());
  }
}

TEST_CASE("run: supercritical mass hits the blow-up threshold before 0.6") {
  const ModelParams p = make_params(1.0, 0.0, 4.0);
  SchemeConfig cfg = make_config(100, 1e-3);
  cfg.t_end = 0.6;
  cfg.snapshot_dt = 0.01;
  const Trajectory tr = run(p, cfg, [](double) { return 0.25; });
  CHECK(tr.reason == TerminationReason::blowup_threshold);
  CHECK(tr.termination_time < 0.6);
  CHECK(tr.records.back().fronts.ell() <= cfg.support_floor * tr.initial_length * (1 + 1e-12));
}

TEST_CASE("run: positivity loss is a recorded termination") {
  // Coarse cells with a strong sink: the diffusive step bound does not limit a*dt, so one step overshoots zero.
  const ModelParams p = make_params(10.0, 0.0, 400.0);
  SchemeConfig cfg = make_config(8, 1e-3);
  cfg.t_end = 1e4;
  cfg.snapshot_dt = 1e4;
  const Trajectory tr = run(p, cfg, [](double) { return 1.0; });
  CHECK(tr.reason == TerminationReason::positivity_loss);
  CHECK(tr.termination_time < cfg.t_end);
  for (const auto& r : tr.records)
    for (double v : r.state.v) CHECK(v > 0.0);
  CHECK_THROWS_AS(step(tr.records.back().state, cfg), PositivityLoss);
}

TEST_CASE("sampler and config validation") {
  const ModelParams p = make_params(1.0, 0.0, 1.0);
  CHECK_THROWS_AS(sample_state(p, 10, [](double e) { return e - 0.5; }), ParameterError);
  SchemeConfig cfg;
  cfg.N = 1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = SchemeConfig{};
  cfg.cfl = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  ModelParams bad = p;
  bad.M = -1.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}
