#include "satflux/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "satflux/errors.hpp"

namespace satflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

double gk_integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  // A 1e-15 target sits below the roundoff of the error estimate and forces full-depth bisection.
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
}

}  // namespace

FluxModel FluxModel::classical(double nu, double c) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ParameterError("classical flux: nu must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("classical flux: c must be positive");
  FluxModel f;
  f.family_ = "classical";
  f.c_ = c;
  f.nu_ = nu;
  f.alpha_ = 2.0;
  // sup_y y·(c − Φ(y)) ≈ 0.3003·c²/ν, so c²/(2ν) bounds the tail for every y > 0.
  f.k_tail_ = c * c / (2.0 * nu);
  for (int k = -40; k <= 80; ++k) {
    const double y = std::pow(10.0, 0.1 * k) * c / nu;
    if (f.raw_phi(y) < c - f.k_tail_ / y - 1e-15 * c) {
      throw NumericError("classical flux: tail constant check failed");
    }
  }
  return f;
}

FluxModel FluxModel::custom(ScalarFn phi, ScalarFn dphi, double c, double alpha, double k_tail,
                            std::string family) {
  if (!phi || !dphi) throw ParameterError("custom flux: phi and dphi are required");
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("custom flux: c must be positive");
  if (!(alpha >= 2.0)) throw ParameterError("custom flux: alpha must be >= 2");
  if (!(k_tail > 0.0)) throw ParameterError("custom flux: K_tail must be positive");
  FluxModel f;
  f.family_ = std::move(family);
  f.c_ = c;
  f.alpha_ = alpha;
  f.k_tail_ = k_tail;
  f.custom_ = std::make_shared<const Custom>(Custom{std::move(phi), std::move(dphi)});
  return f;
}

double FluxModel::raw_phi(double y) const {
  if (custom_) return custom_->phi(y);
  const double z = *nu_ * y / c_;
  return c_ * z / std::hypot(1.0, z);
}

double FluxModel::raw_dphi(double y) const {
  if (custom_) return custom_->dphi(y);
  const double h = std::hypot(1.0, *nu_ * y / c_);
  return *nu_ / (h * h * h);
}

double FluxModel::phi(double y) const {
  require_finite(y, "phi");
  return raw_phi(y);
}

double FluxModel::dphi(double y) const {
  require_finite(y, "phi_prime");
  return raw_dphi(y);
}

double FluxModel::g(double r) const {
  require_finite(r, "g");
  const double ar = std::abs(r);
  if (ar >= c_) throw SaturationDomainError("g: |r| must be below the saturation speed c");
  if (custom_) return g_by_inversion(r);
  return c_ * r / (*nu_ * std::sqrt((c_ - ar) * (c_ + ar)));
}

double FluxModel::g_by_inversion(double r) const {
  require_finite(r, "g");
  const double target = std::abs(r);
  if (target >= c_) throw SaturationDomainError("g: |r| must be below the saturation speed c");
  if (target == 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (raw_phi(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("g: could not bracket the inverse");
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double f = raw_phi(y) - target;
    if (f == 0.0) break;
    if (f > 0.0) {
      hi = y;
    } else {
      lo = y;
    }
    const double d = raw_dphi(y);
    double next = (d > 0.0) ? y - f / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - y);
    y = next;
    if (step <= 1e-15 * std::max(1.0, y) || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      break;
    }
  }
  return std::copysign(y, r);
}

// ∫_{y_lo}^{y_hi} y Φ'(y) dy for 0 <= y_lo <= y_hi <= ∞. The tail beyond y = 1 is mapped by
// s = 1/y onto a bounded interval where the integrand Φ'(1/s)/s³ stays finite (α >= 2).
double FluxModel::integrate_y_phi_prime(double y_lo, double y_hi) const {
  if (!(y_hi > y_lo)) return 0.0;
  double total = 0.0;
  if (y_lo < 1.0) {
    total += gk_integrate([this](double y) { return y * raw_dphi(y); }, y_lo, std::min(y_hi, 1.0));
  }
  if (y_hi > 1.0) {
    const double s_lo = (y_hi == kInf) ? 0.0 : 1.0 / y_hi;
    const double s_hi = 1.0 / std::max(y_lo, 1.0);
    total += gk_integrate(
        [this](double s) {
          s = std::max(s, 1e-100);
          return raw_dphi(1.0 / s) / (s * s * s);
        },
        s_lo, s_hi);
  }
  return total;
}

double FluxModel::G_by_quadrature(double u) const {
  require_finite(u, "G");
  const double au = std::abs(u);
  if (au > c_) throw DomainError("G: |u| must not exceed c");
  if (au == 0.0) return 0.0;
  const double upper = (au == c_) ? kInf : g_by_inversion(au);
  return integrate_y_phi_prime(0.0, upper);
}

double FluxModel::G(double u) const {
  require_finite(u, "G");
  const double au = std::abs(u);
  if (au > c_) throw DomainError("G: |u| must not exceed c");
  if (custom_) return G_by_quadrature(u);
  const double s = std::sqrt((c_ - au) * (c_ + au)) / c_;
  return au * au / (*nu_ * (1.0 + s));
}

double FluxModel::G_difference(double u1, double u2) const {
  require_finite(u1, "G");
  require_finite(u2, "G");
  const double a1 = std::abs(u1);
  const double a2 = std::abs(u2);
  if (a1 > c_ || a2 > c_) throw DomainError("G: |u| must not exceed c");
  if (a1 == a2) return 0.0;
  if (custom_) {
    const double y1 = (a1 == c_) ? kInf : g_by_inversion(a1);
    const double y2 = (a2 == c_) ? kInf : g_by_inversion(a2);
    return (y1 >= y2) ? integrate_y_phi_prime(y2, y1) : -integrate_y_phi_prime(y1, y2);
  }
  const double s1 = std::sqrt((c_ - a1) * (c_ + a1)) / c_;
  const double s2 = std::sqrt((c_ - a2) * (c_ + a2)) / c_;
  return (a1 - a2) * (a1 + a2) / (*nu_ * (s1 + s2));
}

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck& HypothesisReport::at(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no hypothesis check named " + name);
}

HypothesisReport validate_hypotheses(const FluxModel& flux, int n_samples, double y_max) {
  if (n_samples < 16) throw ParameterError("validate_hypotheses: n_samples must be >= 16");
  if (!(y_max > 0.0)) throw ParameterError("validate_hypotheses: y_max must be positive");

  const double c = flux.c();
  std::vector<double> ys;
  for (int k = 0; k < n_samples; ++k) ys.push_back(y_max * k / (n_samples - 1));
  const double log_lo = std::log(std::max(1e-6 * y_max, 1e-3));
  for (int k = 0; k < n_samples; ++k) {
    ys.push_back(std::exp(log_lo + (std::log(y_max) - log_lo) * k / (n_samples - 1)));
  }
  std::sort(ys.begin(), ys.end());
  // The two grids meet at y_max up to rounding; near-equal samples would make monotonicity a tie.
  ys.erase(std::unique(ys.begin(), ys.end(),
                       [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }),
           ys.end());

  HypothesisReport report;
  auto guarded = [](auto&& fn) -> std::optional<double> {
    try {
      const double v = fn();
      if (std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };

  {
    HypothesisCheck chk{"oddness", true, 0.0, 1e-12, {}};
    for (double y : ys) {
      auto p = guarded([&] { return flux.phi(y); });
      auto q = guarded([&] { return flux.phi(-y); });
      if (!p || !q) {
        chk.passed = false;
        chk.detail = "phi not evaluable";
        break;
      }
      const double r = std::abs(*p + *q) / std::max(1.0, std::abs(*p));
      chk.value = std::max(chk.value, r);
    }
    chk.passed = chk.passed && chk.value <= chk.tolerance;
    report.checks.push_back(chk);
  }

  {
    HypothesisCheck chk{"monotonicity", true, 0.0, 0.0, {}};
    std::vector<double> all;
    for (auto it = ys.rbegin(); it != ys.rend(); ++it) {
      if (*it > 0.0) all.push_back(-*it);
    }
    all.insert(all.end(), ys.begin(), ys.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double y : all) {
      auto p = guarded([&] { return flux.phi(y); });
      auto d = guarded([&] { return flux.dphi(y); });
      if (!p || !d || !(*p > prev) || !(*d > 0.0)) {
        chk.passed = false;
        chk.value = y;
        std::ostringstream os;
        os << "not strictly increasing at y=" << y;
        chk.detail = os.str();
        break;
      }
      prev = *p;
    }
    report.checks.push_back(chk);
  }

  {
    HypothesisCheck chk{"saturation", true, 0.0, 1e-14 * c, {}};
    double worst = 0.0;
    for (double y : ys) {
      auto p = guarded([&] { return flux.phi(y); });
      if (!p) {
        chk.passed = false;
        chk.detail = "phi not evaluable";
        break;
      }
      worst = std::max(worst, std::abs(*p) - c);
      if (y >= 1.0) worst = std::max(worst, (c - flux.k_tail() / y) - *p);
    }
    chk.value = worst;
    if (chk.passed && !(worst <= chk.tolerance)) {
      chk.passed = false;
      chk.detail = "phi exceeds c or violates phi(y) >= c - K/y";
    }
    report.checks.push_back(chk);
  }

  {
    HypothesisCheck chk{"tail_exponent", true, 0.0, 0.2, {}};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double y : ys) {
      if (y < 0.1 * y_max) continue;
      auto d = guarded([&] { return flux.dphi(y); });
      if (!d || !(*d > 0.0)) {
        chk.passed = false;
        chk.detail = "phi' not positive on the tail";
        break;
      }
      const double lx = std::log(y), ly = std::log(*d);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (chk.passed && n >= 2) {
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      chk.value = -slope - 1.0;
      chk.passed = std::abs(chk.value - flux.alpha()) <= chk.tolerance;
      std::ostringstream os;
      os << "fitted alpha " << chk.value << " vs declared " << flux.alpha();
      chk.detail = os.str();
    } else if (chk.passed) {
      chk.passed = false;
      chk.detail = "not enough tail samples";
    }
    report.checks.push_back(chk);
  }

  {
    HypothesisCheck chk{"inverse_round_trip", true, 0.0, 1e-8, {}};
    const double y_lim = std::min(y_max, 1e3);
    for (double y0 : ys) {
      if (y0 > y_lim) break;
      for (double y : {y0, -y0}) {
        auto p = guarded([&] { return flux.phi(y); });
        if (!p) continue;
        if (std::abs(*p) > c * (1.0 - 1e-6)) continue;
        auto back = guarded([&] { return flux.g(*p); });
        if (!back) {
          chk.passed = false;
          chk.detail = "g not evaluable";
          break;
        }
        chk.value = std::max(chk.value, std::abs(*back - y) / std::max(1.0, std::abs(y)));
      }
    }
    chk.passed = chk.passed && chk.value <= chk.tolerance;
    report.checks.push_back(chk);
  }

  return report;
}

}  // namespace satflux
