#include <doctest.h>

#include <cmath>

#include "satflux/errors.hpp"
#include "satflux/flux.hpp"

using namespace satflux;

namespace {

// Closed forms of the classical family, written out independently of the library.
double phi_ref(double nu, double c, double y) { return nu * y / std::sqrt(1.0 + (nu / c) * (nu / c) * y * y); }
double G_ref(double nu, double c, double u) { return c * c / nu * (1.0 - std::sqrt(1.0 - u * u / (c * c))); }

}  // namespace

TEST_CASE("classical flux values") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  CHECK(f.phi(0.0) == 0.0);
  CHECK(f.phi(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(f.phi(1.0) == doctest::Approx(0.7071067811).epsilon(1e-10));
  CHECK(f.phi(-2.0) == -f.phi(2.0));
  CHECK(std::abs(f.phi(1e6) - (1.0 - 5e-13)) <= 1e-12);
  CHECK(f.phi(1e6) >= f.c() - f.k_tail() / 1e6);
  CHECK(f.alpha() == 2.0);
  CHECK(f.closed_form());
  for (double y : {-50.0, -1.0, 0.3, 7.0, 1e3}) CHECK(f.phi(y) == doctest::Approx(phi_ref(1.0, 1.0, y)).epsilon(1e-14));
  const FluxModel h = FluxModel::classical(2.5, 0.4);
  for (double y : {-3.0, 0.01, 0.5, 20.0}) CHECK(h.phi(y) == doctest::Approx(phi_ref(2.5, 0.4, y)).epsilon(1e-14));
}

TEST_CASE("phi stays finite for huge arguments") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  CHECK(f.phi(1e300) == doctest::Approx(1.0));
  CHECK(f.phi(-1e300) == doctest::Approx(-1.0));
  CHECK(std::abs(f.phi(1e300)) <= f.c());
}

TEST_CASE("phi prime") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  CHECK(f.dphi(0.0) == 1.0);
  for (double y : {-100.0, -1.0, 0.0, 2.0, 1e4}) CHECK(f.dphi(y) > 0.0);
  CHECK(f.dphi(100.0) / f.dphi(200.0) == doctest::Approx(8.0).epsilon(0.02));
  CHECK(f.dphi(3.0) == doctest::Approx(std::pow(1.0 + 9.0, -1.5)).epsilon(1e-14));
}

TEST_CASE("g inverts phi and refuses the saturation boundary") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  CHECK(f.g(0.0) == 0.0);
  CHECK(f.g(1.0 / std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.g(-0.3) == -f.g(0.3));
  CHECK_THROWS_AS(f.g(1.0), SaturationDomainError);
  CHECK_THROWS_AS(f.g(-1.0), SaturationDomainError);
  CHECK_THROWS_AS(f.g(1.5), DomainError);
  for (double y : {1e-3, 0.5, 10.0, 999.0}) {
    CHECK(std::abs(f.g(f.phi(y)) - y) <= 1e-8 * std::max(1.0, y));
    CHECK(std::abs(f.g_by_inversion(f.phi(y)) - y) <= 1e-8 * std::max(1.0, y));
  }
}

TEST_CASE("G is even, finite at c and matches the closed form") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  CHECK(f.G(0.0) == 0.0);
  CHECK(f.G(0.5) == f.G(-0.5));
  CHECK(f.G(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(f.G_by_quadrature(1.0) - 1.0) <= 1e-10);
  CHECK_THROWS_AS(f.G(1.0 + 1e-9), DomainError);
  double prev = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double u = k / 100.0;
    const double val = f.G(u);
    CHECK(val >= prev);
    prev = val;
    CHECK(val == doctest::Approx(G_ref(1.0, 1.0, u)).epsilon(1e-13));
  }
  const FluxModel h = FluxModel::classical(0.7, 2.0);
  for (double u : {-2.0, -1.3, 0.2, 1.99}) CHECK(h.G(u) == doctest::Approx(G_ref(0.7, 2.0, u)).epsilon(1e-13));
}

TEST_CASE("G difference keeps precision near c") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  const double d = 1e-12;
  // G(1) − G(1−d) = √(2d − d²)
  CHECK(f.G_difference(1.0, 1.0 - d) == doctest::Approx(std::sqrt(2 * d - d * d)).epsilon(1e-6));
  CHECK(f.G_difference(0.3, 0.3) == 0.0);
  CHECK(f.G_difference(0.8, -0.2) == doctest::Approx(f.G(0.8) - f.G(0.2)).epsilon(1e-14));
  CHECK(f.G_difference(-1.0, 1.0) == 0.0);
}

TEST_CASE("non-finite input is a domain error") {
  const FluxModel f = FluxModel::classical(1.0, 1.0);
  CHECK_THROWS_AS(f.phi(NAN), DomainError);
  CHECK_THROWS_AS(f.dphi(INFINITY), DomainError);
  CHECK_THROWS_AS(f.g(NAN), DomainError);
  CHECK_THROWS_AS(f.G(NAN), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(FluxModel::classical(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(FluxModel::classical(1.0, -1.0), ParameterError);
  CHECK_THROWS_AS(FluxModel::classical(NAN, 1.0), ParameterError);
}

TEST_CASE("tail constant holds for small c") {
  const FluxModel f = FluxModel::classical(1.0, 0.1);
  for (double y = 1e-3; y < 1e6; y *= 1.7) CHECK(f.phi(y) >= f.c() - f.k_tail() / y - 1e-16);
}

TEST_CASE("custom family goes through inversion and quadrature") {
  const FluxModel f = FluxModel::custom([](double y) { return y / std::sqrt(1.0 + y * y); },
                                        [](double y) { return std::pow(1.0 + y * y, -1.5); }, 1.0, 2.0, 0.5);
  CHECK_FALSE(f.closed_form());
  CHECK(f.family() == "custom");
  CHECK(f.g(0.6) == doctest::Approx(0.6 / std::sqrt(1.0 - 0.36)).epsilon(1e-12));
  for (double u : {0.0, 0.25, -0.7, 0.999, 1.0}) CHECK(std::abs(f.G(u) - G_ref(1.0, 1.0, u)) <= 1e-10);
  CHECK(f.G_difference(1.0, 0.5) == doctest::Approx(G_ref(1, 1, 1.0) - G_ref(1, 1, 0.5)).epsilon(1e-10));
  CHECK(validate_hypotheses(f, 64, 1e4).all_passed());
}

TEST_CASE("custom family with a steeper tail") {
  // Φ(y) = y/(1+y³)^{1/3}, Φ' = (1+y³)^{-4/3}, α = 3.
  const FluxModel f = FluxModel::custom(
      [](double y) { return y / std::cbrt(1.0 + std::abs(y * y * y)); },
      [](double y) { return std::pow(1.0 + std::abs(y * y * y), -4.0 / 3.0); }, 1.0, 3.0, 1.0, "cubic");
  const HypothesisReport rep = validate_hypotheses(f, 64, 1e4);
  CHECK(rep.at("tail_exponent").passed);
  CHECK(rep.at("tail_exponent").value == doctest::Approx(3.0).epsilon(0.05));
  CHECK(f.G(1.0) > f.G(0.9));
  CHECK(std::isfinite(f.G(1.0)));
}

TEST_CASE("hypothesis validator") {
  const HypothesisReport ok = validate_hypotheses(FluxModel::classical(1.0, 1.0), 64, 1e4);
  CHECK(ok.all_passed());
  for (const char* name : {"oddness", "monotonicity", "saturation", "tail_exponent", "inverse_round_trip"}) {
    CHECK(ok.at(name).passed);
  }

  const FluxModel linear = FluxModel::custom([](double y) { return y; }, [](double) { return 1.0; }, 1.0, 2.0, 0.5, "linear");
  const HypothesisReport lin = validate_hypotheses(linear, 64, 1e4);
  CHECK_FALSE(lin.at("saturation").passed);
  CHECK_FALSE(lin.all_passed());

  const FluxModel shifted = FluxModel::custom([](double y) { return y / std::sqrt(1.0 + y * y) + 0.1; },
                                              [](double y) { return std::pow(1.0 + y * y, -1.5); }, 1.0, 2.0, 0.5);
  CHECK_FALSE(validate_hypotheses(shifted, 64, 1e4).at("oddness").passed);

  CHECK_THROWS_AS(validate_hypotheses(FluxModel::classical(1, 1), 8, 10.0), ParameterError);
  CHECK_THROWS_AS(validate_hypotheses(FluxModel::classical(1, 1), 32, 0.0), ParameterError);
}
