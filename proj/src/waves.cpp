#include "satflux/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "satflux/errors.hpp"
#include "satflux/numerics.hpp"

namespace satflux {

const char* to_string(WaveKind kind) { return kind == WaveKind::jump ? "jump" : "continuous"; }

double entropic_speed(double kappa_bar, double M, double a) {
  if (!(kappa_bar >= 0.0 && kappa_bar <= M)) throw ParameterError("entropic_speed: kappa_bar must lie in [0, M]");
  return a * (kappa_bar - 0.5 * M);
}

namespace {

// W = U^{m+1} as a function of (ϰ, M − ϰ). Both coordinates are passed so that the differences
// that vanish at the ends are formed without cancellation.
struct ProfileFormula {
  WaveKind kind;
  const FluxModel* flux;
  double a, m, M, c;
  double tau = 0.0;
  double base = 0.0;  // v_edge^{m+1} for jump profiles

  // continuous kind, closed form
  double u1 = 0.0, s1 = 0.0, cm_right = 0.0, cm_left = 0.0, sum0 = 0.0;

  double W(double kap, double kap_c) const {
    const double mp1 = m + 1.0;
    if (kind == WaveKind::jump) {
      const double u2 = (kap <= 0.5 * M) ? c - a * kap : -c + a * kap_c;
      return base + (mp1 / a) * flux->G_difference(c, u2);
    }
    const double u2 = a * kap + tau;
    if (!flux->closed_form()) return (mp1 / a) * flux->G_difference(u1, u2);
    const double diff = a * kap_c;     // u1 − u2
    const double sum = sum0 + a * kap; // u1 + u2
    const double cm2 = (u2 >= 0.0) ? cm_right + diff : cm_left + a * kap;  // c − |u2|
    const double s2 = std::sqrt(std::max(0.0, cm2 * (2.0 * c - cm2))) / c;
    const double den = *flux->nu() * (s1 + s2);
    if (den == 0.0) return 0.0;
    return (mp1 / a) * diff * sum / den;
  }

  double U(double kap, double kap_c) const {
    const double w = W(kap, kap_c);
    if (!(w > 0.0)) return 0.0;
    return m == 0.0 ? w : std::pow(w, 1.0 / (m + 1.0));
  }
};

ProfileFormula continuous_formula(const ModelParams& p, double M, double tau) {
  ProfileFormula f{WaveKind::continuous, &p.flux, p.a, p.m, M, p.flux.c()};
  f.tau = tau;
  f.u1 = p.a * M + tau;
  f.cm_right = std::max(0.0, f.c - f.u1);
  f.cm_left = std::max(0.0, f.c + tau);
  f.s1 = std::sqrt(f.cm_right * (2.0 * f.c - f.cm_right)) / f.c;
  f.sum0 = p.a * M + 2.0 * tau;
  return f;
}

ProfileFormula jump_formula(const ModelParams& p, double v_edge) {
  ProfileFormula f{WaveKind::jump, &p.flux, p.a, p.m, p.M, p.flux.c()};
  f.tau = -f.c;
  f.base = std::pow(v_edge, p.m + 1.0);
  return f;
}

ProfileFormula formula_of(const WaveProfile& prof) {
  if (prof.kind == WaveKind::jump) return jump_formula(prof.params, *prof.v_edge);
  return continuous_formula(prof.params, prof.params.M, *prof.tau);
}

void fill_profile(WaveProfile& prof, const ProfileFormula& f, double xi_minus, int N) {
  if (N < 8) throw ParameterError("wave profile: N must be >= 8");
  const double M = f.M;
  prof.kappa.resize(N);
  prof.kappa_c.resize(N);
  prof.U.resize(N);
  prof.xi.resize(N);
  for (int k = 0; k < N; ++k) {
    const double half = 0.5 * std::numbers::pi * k / (N - 1);
    prof.kappa[k] = M * std::sin(half) * std::sin(half);
    prof.kappa_c[k] = M * std::cos(half) * std::cos(half);
  }
  prof.kappa.front() = 0.0;
  prof.kappa_c.front() = M;
  prof.kappa.back() = M;
  prof.kappa_c.back() = 0.0;
  for (int k = 0; k < N; ++k) prof.U[k] = f.U(prof.kappa[k], prof.kappa_c[k]);

  boost::math::quadrature::tanh_sinh<double> ts(15);
  CompensatedSum xi_acc, first_moment;
  prof.xi[0] = xi_minus;
  for (int k = 0; k + 1 < N; ++k) {
    const double ka = prof.kappa[k], kb = prof.kappa[k + 1];
    const double ca = prof.kappa_c[k], cb = prof.kappa_c[k + 1];
    const double mid = 0.5 * (ka + kb);
    // Boost passes xc = a − x (<= 0) left of the midpoint and xc = b − x (>= 0) right of it.
    auto coords = [&](double x, double xc) {
      return (x < mid) ? std::pair{ka - xc, ca + xc} : std::pair{kb - xc, cb + xc};
    };
    auto inv_u = [&](double x, double xc) {
      const auto [kap, kc] = coords(x, xc);
      const double u = f.U(kap, kc);
      return u > 0.0 ? 1.0 / u : 0.0;
    };
    auto kap_over_u = [&](double x, double xc) {
      const auto [kap, kc] = coords(x, xc);
      const double u = f.U(kap, kc);
      return u > 0.0 ? kap / u : 0.0;
    };
    double err = 0.0;
    const double seg = ts.integrate(inv_u, ka, kb, 1e-14, &err);
    const double mom = ts.integrate(kap_over_u, ka, kb, 1e-14, &err);
    if (!std::isfinite(seg) || !std::isfinite(mom)) throw NumericError("wave profile: quadrature did not converge");
    xi_acc.add(seg);
    first_moment.add(mom);
    prof.xi[k + 1] = xi_minus + xi_acc.value();
  }
  const double ell = xi_acc.value();
  prof.kappa_bar = first_moment.value() / ell;

  double worst = 0.0;
  for (int k = 1; k + 1 < N; ++k) {
    const double kap = prof.kappa[k];
    const double h = std::min({0.25 * std::min(kap, prof.kappa_c[k]), 1e-2 * M});
    const double dW = ridders_derivative([&](double x) { return f.W(x, M - x); }, kap, h);
    const double g = f.flux->g(f.a * kap + f.tau);
    worst = std::max(worst, std::abs(dW / (f.m + 1.0) + g) / std::max(1.0, std::abs(g)));
  }
  prof.ode_residual = worst;

  CompensatedSum mass;
  for (int k = 0; k + 1 < N; ++k) mass.add(0.5 * (prof.U[k] + prof.U[k + 1]) * (prof.xi[k + 1] - prof.xi[k]));
  prof.mass_residual = std::abs(mass.value() - M) / M;
}

bool near(double x, double y, double scale) { return std::abs(x - y) <= 1e-12 * std::max(1.0, scale); }

}  // namespace

AdmissibilityReport admissibility(const ModelParams& params, double M, double tau) {
  if (!(M > 0.0)) throw ParameterError("admissibility: M must be positive");
  const double a = params.a;
  const double c = params.flux.c();
  const double tol = 1e-12 * std::max(1.0, a * M);
  AdmissibilityReport r;
  r.mass_ok = a * M <= 2.0 * c + tol;
  if (!r.mass_ok) r.messages.push_back("mass exceeds 2c/a");
  r.sigma_range_ok = (tau >= -0.5 * a * M - tol) && (tau <= c - a * M + tol);
  if (!r.sigma_range_ok) r.messages.push_back("reduced speed outside [-aM/2, c - aM]");
  r.kappa_star = (a > 0.0) ? -M - 2.0 * tau / a : -M;
  if (r.kappa_star > 1e-12) r.messages.push_back("kappa_star > 0");
  r.entropic = std::abs(tau + 0.5 * a * M) <= tol;

  r.h_positive = true;
  if (std::abs(a * M + tau) > c + tol || std::abs(tau) > c + tol) {
    r.h_positive = false;
    r.messages.push_back("G arguments leave [-c, c]");
  } else {
    const double u1 = std::clamp(a * M + tau, -c, c);
    const double top = params.flux.G(u1);
    for (int k = 0; k < 64; ++k) {
      const double kap = M * (k + 0.5) / 64.0;
      const double u2 = std::clamp(a * kap + tau, -c, c);
      if (!(top - params.flux.G(u2) > 0.0)) {
        r.h_positive = false;
        std::ostringstream os;
        os << "G(aM+tau) - G(a*kappa+tau) <= 0 at kappa=" << kap;
        r.messages.push_back(os.str());
        break;
      }
    }
  }
  return r;
}

WaveProfile continuous_profile(const ModelParams& params, double M, double tau, double xi_minus, int N) {
  params.validate();
  if (!(params.a > 0.0)) throw ParameterError("continuous_profile: a must be positive");
  const AdmissibilityReport rep = admissibility(params, M, tau);
  if (!rep.admissible()) {
    std::string msg = "inadmissible (M, tau):";
    for (const auto& m : rep.messages) msg += " " + m + ";";
    throw AdmissibilityError(msg);
  }
  const double a = params.a, c = params.flux.c();
  const bool left_zero = rep.entropic;
  const bool left_saturated = near(tau, -c, c);
  const bool right_saturated = near(a * M + tau, c, c);
  if (params.m == 0.0 && ((left_zero && !left_saturated) || !right_saturated)) {
    throw NumericError("continuous_profile: for m = 0 an unsaturated zero end gives an unbounded support");
  }

  WaveProfile prof;
  prof.kind = WaveKind::continuous;
  prof.params = params;
  prof.params.M = M;
  prof.tau = tau;
  prof.entropic = rep.entropic;
  fill_profile(prof, continuous_formula(prof.params, M, tau), xi_minus, N);
  prof.sigma = tau + a * prof.kappa_bar;
  return prof;
}

WaveProfile jump_profile(const ModelParams& params, double v_edge, double xi_minus, int N) {
  params.validate();
  const double c = params.flux.c();
  if (std::abs(params.a * params.M - 2.0 * c) > 1e-12 * c) {
    throw ParameterError("jump_profile: requires the critical mass aM = 2c");
  }
  if (!(v_edge > 0.0) || !std::isfinite(v_edge)) throw ParameterError("jump_profile: v_edge must be positive");
  WaveProfile prof;
  prof.kind = WaveKind::jump;
  prof.params = params;
  prof.tau = -c;
  prof.v_edge = v_edge;
  fill_profile(prof, jump_formula(params, v_edge), xi_minus, N);
  prof.sigma = params.a * prof.kappa_bar - c;
  return prof;
}

double profile_value(const WaveProfile& profile, double kappa) {
  const double M = profile.params.M;
  if (!(kappa >= 0.0 && kappa <= M)) throw DomainError("profile_value: kappa must lie in [0, M]");
  return formula_of(profile).U(kappa, M - kappa);
}

DualState to_dual_state(const WaveProfile& profile, int N) {
  if (profile.kind != WaveKind::jump) {
    throw UnrepresentableError("continuous profiles vanish at the ends, so 1/U is unbounded in the dual variable");
  }
  if (N < 8) throw ParameterError("to_dual_state: N must be >= 8");
  const double M = profile.params.M;
  const double x0 = profile.xi.front();
  std::vector<double> kap = profile.kappa;
  std::vector<double> xi(profile.xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = profile.xi[k] - x0;
  const double ell = xi.back();
  auto interp = boost::math::interpolators::pchip<std::vector<double>>(std::move(kap), std::move(xi));

  DualState s;
  s.params = profile.params;
  s.v.resize(static_cast<std::size_t>(N));
  const double h = M / N;
  double left = 0.0;
  for (int i = 0; i < N; ++i) {
    const double right = (i + 1 == N) ? ell : interp((i + 1) * h);
    s.v[i] = (right - left) / h;
    left = right;
  }
  return s;
}

}  // namespace satflux
