#include "satflux/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "satflux/errors.hpp"
#include "satflux/numerics.hpp"

namespace satflux {

const char* to_string(SupportRegime regime) {
  switch (regime) {
    case SupportRegime::spreading: return "spreading";
    case SupportRegime::critical: return "critical";
    case SupportRegime::concentrating: return "concentrating";
  }
  return "critical";
}

double RhSeries::max_minus() const {
  double m = 0.0;
  for (double r : r_minus) m = std::max(m, r);
  return m;
}

double RhSeries::max_plus() const {
  double m = 0.0;
  for (double r : r_plus) m = std::max(m, r);
  return m;
}

double mu_bar(const DualState& state) {
  CompensatedSum num, den;
  for (std::size_t i = 0; i < state.size(); ++i) {
    num.add(state.eta(i) * state.v[i]);
    den.add(state.v[i]);
  }
  return num.value() / den.value();
}

FrontState advance_fronts(const FrontState& fronts, double mu_bar, const ModelParams& params, double dt) {
  if (!(dt > 0.0)) throw ParameterError("advance_fronts: dt must be positive");
  const double c = params.flux.c();
  FrontState next = fronts;
  next.t = fronts.t + dt;
  next.sigma_minus = fronts.sigma_minus + dt * (-c + params.a * mu_bar);
  next.sigma_plus = fronts.sigma_plus + dt * (c - params.a * (params.M - mu_bar));
  if (!(next.sigma_plus > next.sigma_minus)) throw SupportCollapse(next.t);
  return next;
}

PhysicalSnapshot reconstruct(const DualState& state, const FrontState& fronts) {
  const std::size_t N = state.size();
  const double h = state.d_eta();
  PhysicalSnapshot snap;
  snap.t = state.t;
  snap.x.resize(N);
  snap.u.resize(N);
  snap.mu.resize(N);
  CompensatedSum face;  // Σ_{j<i} v_j
  CompensatedSum xsum;
  for (std::size_t i = 0; i < N; ++i) {
    const double xi = fronts.sigma_minus + h * (face.value() + 0.5 * state.v[i]);
    snap.x[i] = xi;
    snap.u[i] = 1.0 / state.v[i];
    snap.mu[i] = state.eta(i);
    xsum.add(xi);
    face.add(state.v[i]);
  }
  snap.mu_bar = mu_bar(state);
  snap.sigma_minus = fronts.sigma_minus;
  snap.sigma_plus = fronts.sigma_plus;
  snap.sigma_c = 0.5 * (fronts.sigma_minus + fronts.sigma_plus);
  snap.ell = fronts.sigma_plus - fronts.sigma_minus;
  snap.mass_center = xsum.value() * h / state.params.M;
  return snap;
}

PhysicalSnapshot reconstruct(const DualState& state, double sigma_minus) {
  return reconstruct(state, FrontState{state.t, sigma_minus, sigma_minus + state.length()});
}

SupportForecast predict_support(const ModelParams& params, double ell0) {
  if (!(ell0 > 0.0)) throw ParameterError("predict_support: ell0 must be positive");
  const double c = params.flux.c();
  SupportForecast f;
  f.slope = 2.0 * c - params.a * params.M;
  if (std::abs(f.slope) <= 1e-12 * c) {
    f.regime = SupportRegime::critical;
  } else if (f.slope > 0.0) {
    f.regime = SupportRegime::spreading;
  } else {
    f.regime = SupportRegime::concentrating;
    f.t_star = ell0 / (-f.slope);
  }
  return f;
}

CenterDiagnostics center_diagnostics(const PhysicalSnapshot& snapshot, const ModelParams& params) {
  CenterDiagnostics d;
  d.sigma_c = snapshot.sigma_c;
  d.mass_center = snapshot.mass_center;
  const double M = params.M;
  d.identity_residual = std::abs(M * snapshot.mass_center - M * snapshot.sigma_plus + snapshot.ell * snapshot.mu_bar);
  // (σ₊' + σ₋')/2 under the front ODEs.
  d.sigma_c_rate = 0.5 * params.a * (2.0 * snapshot.mu_bar - M);
  return d;
}

RhSeries rh_residual(const Trajectory& traj) {
  const auto& recs = traj.records;
  const std::size_t n = recs.size();
  if (n < 3) throw InsufficientDataError("rh_residual: need at least 3 snapshots");
  const double c = traj.params.flux.c();
  const double a = traj.params.a;
  const double M = traj.params.M;

  // Three-point derivative on a nonuniform grid; one-sided at the ends.
  auto derivative = [&](std::size_t k, auto&& pos) {
    std::size_t i0, i1, i2;
    if (k == 0) {
      i0 = 0, i1 = 1, i2 = 2;
    } else if (k == n - 1) {
      i0 = n - 3, i1 = n - 2, i2 = n - 1;
    } else {
      i0 = k - 1, i1 = k, i2 = k + 1;
    }
    const double t0 = recs[i0].diag.t, t1 = recs[i1].diag.t, t2 = recs[i2].diag.t;
    const double t = recs[k].diag.t;
    const double w0 = ((t - t1) + (t - t2)) / ((t0 - t1) * (t0 - t2));
    const double w1 = ((t - t0) + (t - t2)) / ((t1 - t0) * (t1 - t2));
    const double w2 = ((t - t0) + (t - t1)) / ((t2 - t0) * (t2 - t1));
    return w0 * pos(recs[i0]) + w1 * pos(recs[i1]) + w2 * pos(recs[i2]);
  };

  RhSeries out;
  for (std::size_t k = 0; k < n; ++k) {
    const double mb = recs[k].diag.mu_bar;
    const double dm = derivative(k, [](const TrajectoryRecord& r) { return r.fronts.sigma_minus; });
    const double dp = derivative(k, [](const TrajectoryRecord& r) { return r.fronts.sigma_plus; });
    out.t.push_back(recs[k].diag.t);
    out.r_minus.push_back(std::abs(dm - (-c + a * mb)));
    out.r_plus.push_back(std::abs(dp - (c - a * (M - mb))));
  }
  return out;
}

void fill_rh_residuals(Trajectory& traj) {
  if (traj.records.size() < 3) {
    for (auto& r : traj.records) {
      r.diag.rh_minus = std::numeric_limits<double>::quiet_NaN();
      r.diag.rh_plus = std::numeric_limits<double>::quiet_NaN();
    }
    return;
  }
  const RhSeries rh = rh_residual(traj);
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    traj.records[k].diag.rh_minus = rh.r_minus[k];
    traj.records[k].diag.rh_plus = rh.r_plus[k];
  }
}

}  // namespace satflux
