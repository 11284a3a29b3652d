#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace satflux {

/**
 * Saturated flux Φ with its calculus: Φ', g = Φ⁻¹ on (−c, c) and G(u) = ∫₀ᵘ g.
 *
 * Φ is odd, strictly increasing, saturates at c for y → ∞ and its derivative decays like
 * y^(−α−1). The built-in family Φ(y) = νy/√(1+(ν/c)²y²) (α = 2) evaluates everything in
 * closed form. User-supplied families provide Φ and Φ' only; g is then obtained by a
 * safeguarded Newton/bisection inversion and G by quadrature.
 *
 * Values are immutable and cheap to copy (custom callables are shared).
 */
class FluxModel {
 public:
  using ScalarFn = std::function<double(double)>;

  static FluxModel classical(double nu, double c);
  static FluxModel custom(ScalarFn phi, ScalarFn dphi, double c, double alpha, double k_tail,
                          std::string family = "custom");

  double phi(double y) const;
  double dphi(double y) const;
  /// Inverse of Φ. Throws SaturationDomainError for |r| >= c.
  double g(double r) const;
  /// G(u) for |u| <= c.
  double G(double u) const;
  /// G(u1) − G(u2), evaluated without cancellation when u1 ≈ u2 or near ±c.
  double G_difference(double u1, double u2) const;

  /// Always the numerical routes, regardless of family. Used as cross-check oracles.
  double g_by_inversion(double r) const;
  double G_by_quadrature(double u) const;

  double c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }
  double k_tail() const noexcept { return k_tail_; }
  /// ν for the built-in family; empty for custom families.
  std::optional<double> nu() const noexcept { return nu_; }
  const std::string& family() const noexcept { return family_; }
  bool closed_form() const noexcept { return !custom_; }

 private:
  struct Custom {
    ScalarFn phi;
    ScalarFn dphi;
  };

  FluxModel() = default;

  double raw_phi(double y) const;
  double raw_dphi(double y) const;
  double integrate_y_phi_prime(double y_lo, double y_hi) const;

  std::string family_;
  double c_ = 1.0;
  double alpha_ = 2.0;
  double k_tail_ = 0.5;
  std::optional<double> nu_;
  std::shared_ptr<const Custom> custom_;
};

inline FluxModel make_classical_flux(double nu, double c) { return FluxModel::classical(nu, c); }

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst observed residual or fitted quantity
  double tolerance = 0.0;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;

  bool all_passed() const;
  const HypothesisCheck& at(const std::string& name) const;
};

/// Numerically audits oddness, monotonicity, saturation with K_tail, the tail exponent and
/// the g∘Φ identity. Failures are report entries, never exceptions.
HypothesisReport validate_hypotheses(const FluxModel& flux, int n_samples, double y_max);

}  // namespace satflux
