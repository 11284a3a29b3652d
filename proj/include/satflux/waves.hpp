#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satflux/model.hpp"

namespace satflux {

enum class WaveKind { continuous, jump };

const char* to_string(WaveKind kind);

/// Traveling-wave profile in mass coordinates ϰ ∈ [0, M] and in the moving space frame.
struct WaveProfile {
  WaveKind kind = WaveKind::continuous;
  ModelParams params;
  std::optional<double> tau;     // reduced speed σ − aϰ̄ (−c for jump profiles)
  std::optional<double> v_edge;  // jump profiles only
  std::vector<double> kappa;
  std::vector<double> kappa_c;   // M − ϰ, kept separately for accuracy near ϰ = M
  std::vector<double> U;
  std::vector<double> xi;
  double sigma = 0.0;
  double kappa_bar = 0.0;
  double K_const = 0.0;
  bool entropic = false;
  double ode_residual = 0.0;   // max relative residual of U^m U' + g(aϰ + τ) at interior nodes
  double mass_residual = 0.0;  // |∫U dξ − M|/M by the trapezoid rule in ξ

  double xi_minus() const { return xi.front(); }
  double xi_plus() const { return xi.back(); }
  double ell() const { return xi.back() - xi.front(); }
};

struct AdmissibilityReport {
  bool mass_ok = false;
  bool sigma_range_ok = false;
  bool h_positive = false;
  bool entropic = false;
  double kappa_star = 0.0;
  std::vector<std::string> messages;

  bool admissible() const { return mass_ok && sigma_range_ok && h_positive && kappa_star <= 1e-12; }
};

AdmissibilityReport admissibility(const ModelParams& params, double M, double tau);

/// U^{m+1} = ((m+1)/a)[G(aM + τ) − G(aϰ + τ)] on N endpoint-clustered nodes.
WaveProfile continuous_profile(const ModelParams& params, double M, double tau, double xi_minus, int N);

/// U^{m+1} = v_edge^{m+1} + ((m+1)/a)[G(c) − G(c − aϰ)], at the critical mass aM = 2c.
WaveProfile jump_profile(const ModelParams& params, double v_edge, double xi_minus, int N);

double entropic_speed(double kappa_bar, double M, double a);

/// U at an arbitrary mass coordinate, from the closed-form relation of the profile.
double profile_value(const WaveProfile& profile, double kappa);

/// Cell averages of 1/U on an N-cell mass grid. Only jump profiles have a bounded 1/U.
DualState to_dual_state(const WaveProfile& profile, int N);

}  // namespace satflux
