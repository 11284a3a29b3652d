#pragma once

#include <string>
#include <vector>

#include "satflux/model.hpp"

namespace satflux {

/// Every tolerance used by the invariant checks, in one place so it can be echoed into metadata.
struct Tolerances {
  double mass_law = 1e-10;           // × (1 + t_end)
  double bound_cells = 10.0;         // slack of the envelope bounds in units of Δη
  double front_consistency = 1e-9;   // × (1 + t), on top of the 2ε^κ·t gap
  double support_law = 1e-9;         // on top of the 2ε^κ·t gap
  double center_identity = 1e-6;     // × M·(1 + |σ₊|)
  double center_sign_threshold = 1e-6;
  double blowup_forecast = 0.05;     // relative error of the fitted zero crossing
  double blowup_reach = 0.1;         // the forecast check applies once ℓ <= this × ℓ(0)
  double convergence_order = 0.8;
  double convergence_growth = 0.10;  // a refined grid may not raise the error by more than this
  int envelope_warmup = 10;          // snapshot intervals used to estimate C5
};

const Tolerances& default_tolerances();

struct InvariantEntry {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  double worst_t = 0.0;
  double worst_eta = 0.0;  // NaN when the check has no spatial location
  std::string detail;
};

struct InvariantReport {
  std::vector<InvariantEntry> entries;

  bool all_passed() const;
  const InvariantEntry& at(const std::string& name) const;
};

/// Super-solution envelope B(t) + h(η) and the sub-solution floor σ₁ − at.
struct EnvelopeParams {
  double sigma1 = 0.0;
  double lambda_env = 0.0;
  double eps = 0.0;
  double A = 0.0;
  std::vector<double> h;  // at cell centers, h <= 0, h = 0 at η = 0 and η = M
  double B0 = 0.0;
  double C5 = 0.0;

  double B(double t) const { return B0 + C5 * t; }
  double h_max() const { return 0.0; }
};

/// Builds the envelope of a run; C5 is estimated from the first warm-up snapshot intervals.
EnvelopeParams make_envelope(const Trajectory& traj, const Tolerances& tol = default_tolerances());

double bv_seminorm(const DualState& state);

InvariantEntry check_mass_law(const Trajectory& traj, const Tolerances& tol = default_tolerances());
/// Two entries: "lower_bound" and "upper_bound".
std::vector<InvariantEntry> check_bounds(const Trajectory& traj, const EnvelopeParams& env,
                                         const Tolerances& tol = default_tolerances());
InvariantEntry check_support_law(const Trajectory& traj, const Tolerances& tol = default_tolerances());
InvariantEntry check_front_consistency(const Trajectory& traj, const Tolerances& tol = default_tolerances());
InvariantEntry check_center_identity(const Trajectory& traj, const Tolerances& tol = default_tolerances());
InvariantEntry check_center_drift_sign(const Trajectory& traj, const Tolerances& tol = default_tolerances());
InvariantEntry check_positivity(const Trajectory& traj);
InvariantEntry check_monotone_reconstruction(const Trajectory& traj);
InvariantEntry check_bv_finite(const Trajectory& traj);

struct BlowupFit {
  bool applicable = false;
  double t_star = 0.0;     // ℓ(0)/(aM − 2c)
  double t_fit = 0.0;      // zero crossing of the least-squares line through (t, ℓ)
  double rel_error = 0.0;
};

BlowupFit fit_blowup(const Trajectory& traj, const Tolerances& tol = default_tolerances());
/// Passes vacuously (with a note) for runs that are not concentrating or did not get close enough.
InvariantEntry check_blowup_forecast(const Trajectory& traj, const Tolerances& tol = default_tolerances());

InvariantReport validate_trajectory(const Trajectory& traj, const Tolerances& tol = default_tolerances());

struct ObservedOrderReport {
  std::vector<int> grids;
  std::vector<double> errors;     // max-norm preservation error ‖v(t_end) − v(0)‖_∞
  std::vector<double> errors_l1;  // Δη·Σ|v(t_end) − v(0)|, reported alongside
  std::vector<double> orders;     // successive log2 ratios of the max-norm errors
  double fitted_order = 0.0;      // least-squares slope of −log e against log N
  double fitted_order_l1 = 0.0;
  bool monotone = true;
  bool passed = false;
};

/// Steady jump-wave preservation error on a sequence of doubling grids (at least three).
ObservedOrderReport convergence_study(const ModelParams& params, const SchemeConfig& base_config,
                                      const std::vector<int>& grids, double v_edge = 1.0,
                                      const Tolerances& tol = default_tolerances());

}  // namespace satflux
