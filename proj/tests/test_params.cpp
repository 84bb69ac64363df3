#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ionchaos/params.hpp"

using namespace ionchaos;
using doctest::Approx;

TEST_CASE("calcium setup gives the quoted driving strength and Lamb-Dicke parameter") {
  const PhysicalConfig cfg;
  const auto p = derive_dimensionless(cfg);
  CHECK(p.epsilon() == Approx(1333.0).epsilon(0.005));
  CHECK(p.eta() == Approx(0.502).epsilon(0.002));
  CHECK(p.N() == 4);
  CHECK(p.delta() == Approx(0.01).epsilon(1e-12));
}

TEST_CASE("beams perpendicular to the trap axis decouple") {
  PhysicalConfig cfg;
  cfg.theta = std::numbers::pi / 2.0;
  const auto p = derive_dimensionless(cfg);
  CHECK(p.epsilon() == 0.0);
  CHECK(p.eta() == 0.0);
  CHECK_THROWS_AS(p.require_positive_eta("test"), ParameterError);
}

TEST_CASE("homogeneity in power and beam angle") {
  const PhysicalConfig base;
  const auto p0 = derive_dimensionless(base);
  PhysicalConfig twice = base;
  twice.laser_power *= 2.0;
  const auto p2 = derive_dimensionless(twice);
  CHECK(p2.epsilon() == Approx(2.0 * p0.epsilon()).epsilon(1e-14));
  CHECK(p2.eta() == p0.eta());

  for (int k = 0; k <= 20; ++k) {
    PhysicalConfig c = base;
    c.theta = k * (std::numbers::pi / 2.0) / 20.0;
    const auto p = derive_dimensionless(c, 4);
    const double ct = std::cos(c.theta);
    CHECK(p.epsilon() == Approx(p0.epsilon() * ct * ct).epsilon(1e-12).scale(p0.epsilon()));
    CHECK(p.eta() == Approx(p0.eta() * ct).epsilon(1e-12).scale(p0.eta()));
  }
}

TEST_CASE("dimensionless time conversions") {
  const double w = 2.0 * std::numbers::pi * 500e3;
  CHECK(tau_to_seconds(100.0, w) == Approx(31.8e-6).epsilon(0.001));
  CHECK(tau_to_seconds(30.0, w) == Approx(9.54e-6).epsilon(0.001));
  CHECK(tau_to_seconds(0.0, w) == 0.0);
  for (double tau : {0.1, 1.0, 17.3, 2000.0})
    CHECK(seconds_to_tau(tau_to_seconds(tau, w), w) == Approx(tau).epsilon(1e-15));
}

TEST_CASE("detuning and frequency ratio stay consistent") {
  for (double delta : {0.01, -0.3, 0.49, 0.0}) {
    const auto p = DimensionlessParams::from_detuning(1.0, 0.45, 4, delta);
    CHECK(p.delta() + p.mu() == 4.0);
    CHECK(p.delta() == delta);
    CHECK(p.hbar_eff() == 2.0 * 0.45 * 0.45);
  }
  const auto q = DimensionlessParams::from_mu(1.0, 0.45, 3.99);
  CHECK(q.N() == 4);
  CHECK(q.delta() + q.mu() == 4.0);
  CHECK(q.mu() == Approx(3.99).epsilon(1e-15));
  const auto r = DimensionlessParams::from_mu(1.0, 0.45, 3.99, 3);
  CHECK(r.N() == 3);
  CHECK(r.delta() == Approx(-0.99).epsilon(1e-14));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(DimensionlessParams::from_detuning(-1.0, 0.45, 4, 0.01), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::from_detuning(1.0, -0.1, 4, 0.01), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::from_detuning(1.0, 0.45, 0, 0.01), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::from_detuning(std::nan(""), 0.45, 4, 0.01), ParameterError);
  PhysicalConfig cfg;
  cfg.mass = 0.0;
  CHECK_THROWS_AS(derive_dimensionless(cfg), ParameterError);
  cfg = PhysicalConfig{};
  cfg.theta = 2.0;
  CHECK_THROWS_AS(derive_dimensionless(cfg), ParameterError);
}
