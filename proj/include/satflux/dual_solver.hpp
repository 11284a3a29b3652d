#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "satflux/model.hpp"

namespace satflux {

using Sampler = std::function<double(double)>;

/// Initial datum with linear boundary ramps of slope ∓B(ε), B(ε) = (c − ε^κ)/(2ε), so that the
/// regularized boundary flux condition holds at η = 0 and η = M.
struct CompatibleInitial {
  Sampler v0;
  double M = 0.0;
  double eps = 0.0;
  double kappa_bc = 0.0;
  double B = 0.0;
  double delta_left = 0.0;
  double delta_right = 0.0;
  double residual_left = 0.0;   // |Φ(v_η/v^{2+m}) + εv_η + (c − ε^κ)| at η = 0
  double residual_right = 0.0;  // |Φ(v_η/v^{2+m}) + εv_η − (c − ε^κ)| at η = M

  double operator()(double eta) const;
  /// Samples at the cell centers of an N-cell grid.
  DualState to_state(const ModelParams& params, int N) const;
};

CompatibleInitial compatibilize_initial(const ModelParams& params, Sampler v0, double eps, double kappa_bc,
                                        double delta0);

DualState sample_state(const ModelParams& params, int N, const Sampler& v0);

/// Flux at interface index `face` ∈ [0, N]; faces 0 and N carry the boundary values ∓(c − ε^κ).
double numerical_flux(const DualState& state, std::size_t face, double eps, double kappa_bc,
                      InterfaceMean mean = InterfaceMean::arithmetic);

double stable_time_step(const DualState& state, const SchemeConfig& config);

/// One explicit step with the stable Δt. Throws PositivityLoss if some v_i <= 0 afterwards.
DualState step(const DualState& state, const SchemeConfig& config);

/// In-place stepper used by run(); avoids reallocating the state each step.
class DualStepper {
 public:
  DualStepper(const ModelParams& params, const SchemeConfig& config);

  double eps() const noexcept { return eps_; }
  double eps_bc() const noexcept { return eps_bc_; }
  double stable_dt(const std::vector<double>& v) const;
  /// v ← v + dt·(ΔF/Δη − a). Returns the index of the first non-positive cell or -1.
  long advance(std::vector<double>& v, double dt);

 private:
  double flux_at(double vl, double vr) const;

  ModelParams params_;
  SchemeConfig config_;
  double d_eta_;
  double eps_;
  double eps_bc_;
  double phi_prime0_;
  bool classical_;
  double nu_ = 0.0;
  double nu_over_c_ = 0.0;
  std::vector<double> flux_;
};

Trajectory run(const ModelParams& params, const SchemeConfig& config, const Sampler& v0, double sigma_minus0 = 0.0);
Trajectory run(const DualState& initial, const SchemeConfig& config, double sigma_minus0 = 0.0);

/// Stationary state at the critical mass aM = 2c: v_i = 1/U(η_i) with
/// U^{m+1} = v_edge^{m+1} + ((m+1)/a)(G(c) − G(c − aη)).
DualState steady_jump_profile(const ModelParams& params, double v_edge, int N);

}  // namespace satflux
