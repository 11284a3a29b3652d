#pragma once

#include <optional>
#include <vector>

#include "satflux/model.hpp"

namespace satflux {

struct PhysicalSnapshot {
  double t = 0.0;
  std::vector<double> x;   // φ(t, η_i)
  std::vector<double> u;   // 1/v_i
  std::vector<double> mu;  // cumulative mass at cell centers
  double mu_bar = 0.0;
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;
  double sigma_c = 0.0;
  double mass_center = 0.0;
  double ell = 0.0;
};

enum class SupportRegime { spreading, critical, concentrating };

const char* to_string(SupportRegime regime);

struct SupportForecast {
  double slope = 0.0;
  std::optional<double> t_star;
  SupportRegime regime = SupportRegime::critical;
};

struct CenterDiagnostics {
  double sigma_c = 0.0;
  double mass_center = 0.0;
  double identity_residual = 0.0;
  double sigma_c_rate = 0.0;
};

struct RhSeries {
  std::vector<double> t;
  std::vector<double> r_minus;
  std::vector<double> r_plus;

  double max_minus() const;
  double max_plus() const;
};

/// Σηv/Σv over the grid; the discrete support length is the denominator.
double mu_bar(const DualState& state);

/// Forward Euler on σ₋' = −c + aμ̄, σ₊' = c − a(M − μ̄). Throws SupportCollapse if σ₊ <= σ₋.
FrontState advance_fronts(const FrontState& fronts, double mu_bar, const ModelParams& params, double dt);

PhysicalSnapshot reconstruct(const DualState& state, const FrontState& fronts);
/// Fronts taken from the state itself: σ₊ = σ₋ + Δη·Σv.
PhysicalSnapshot reconstruct(const DualState& state, double sigma_minus);

SupportForecast predict_support(const ModelParams& params, double ell0);

CenterDiagnostics center_diagnostics(const PhysicalSnapshot& snapshot, const ModelParams& params);

/// Front-speed residuals against the front ODEs, from three-point differences of the stored
/// front positions. Throws InsufficientDataError for fewer than 3 records.
RhSeries rh_residual(const Trajectory& traj);

/// Writes rh_residual into the diagnostics rows (NaN when there are fewer than 3 records).
void fill_rh_residuals(Trajectory& traj);

}  // namespace satflux
