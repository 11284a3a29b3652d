#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "satflux/flux.hpp"

namespace satflux {

struct ModelParams {
  double a = 1.0;  // chemotactic sensitivity
  double m = 0.0;  // porous-media exponent
  double M = 1.0;  // total mass
  FluxModel flux = FluxModel::classical(1.0, 1.0);

  void validate() const;
};

enum class InterfaceMean { arithmetic, geometric, harmonic };

const char* to_string(InterfaceMean mean);
InterfaceMean interface_mean_from_string(const std::string& name);

struct SchemeConfig {
  int N = 400;
  std::optional<double> eps;  // unset: ε = Δη
  double kappa_bc = 3.0;
  double lambda_env = 0.3;
  double cfl = 0.9;
  double t_end = 1.0;
  double snapshot_dt = 0.01;
  InterfaceMean mean = InterfaceMean::arithmetic;
  double support_floor = 0.05;  // blow-up threshold as a fraction of ℓ(0)
  long long max_steps = 200'000'000;

  double eps_for(double M) const { return eps ? *eps : M / N; }
  void validate() const;
};

/// v = 1/u on the uniform mass grid η_i = (i+½)Δη, Δη = M/N.
struct DualState {
  double t = 0.0;
  ModelParams params;
  std::vector<double> v;

  std::size_t size() const noexcept { return v.size(); }
  double d_eta() const { return params.M / static_cast<double>(v.size()); }
  double eta(std::size_t i) const { return (static_cast<double>(i) + 0.5) * d_eta(); }
  /// Δη·Σv, the support length carried by the dual state.
  double length() const;
};

struct FrontState {
  double t = 0.0;
  double sigma_minus = 0.0;
  double sigma_plus = 1.0;

  double ell() const noexcept { return sigma_plus - sigma_minus; }
};

struct DiagnosticsRow {
  double t = 0.0;
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;
  double ell = 0.0;
  double mu_bar = 0.0;
  double sigma_c = 0.0;
  double mass_center = 0.0;
  double vmin = 0.0;
  double vmax = 0.0;
  double mass_law_residual = 0.0;
  double bv_seminorm = 0.0;
  double rh_minus = 0.0;
  double rh_plus = 0.0;
};

enum class TerminationReason { reached_t_end, positivity_loss, blowup_threshold, step_limit };

const char* to_string(TerminationReason reason);
TerminationReason termination_from_string(const std::string& name);

struct TrajectoryRecord {
  DualState state;
  FrontState fronts;
  DiagnosticsRow diag;
};

struct Trajectory {
  ModelParams params;
  SchemeConfig config;
  double eps = 0.0;
  double eps_bc = 0.0;         // ε^κ_bc, the boundary-flux deficit
  double initial_length = 0.0; // Δη·Σv₀
  std::vector<TrajectoryRecord> records;
  TerminationReason reason = TerminationReason::reached_t_end;
  double termination_time = 0.0;
  std::string detail;
  long long steps = 0;

  double mass_slope() const { return 2.0 * (params.flux.c() - eps_bc) - params.a * params.M; }
};

}  // namespace satflux
