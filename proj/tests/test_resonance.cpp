#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ionchaos/bessel.hpp"
#include "ionchaos/classical.hpp"
#include "ionchaos/resonance.hpp"

using namespace ionchaos;
using namespace ionchaos::resonance;
using classical::ActionAngleState;
using doctest::Approx;

namespace {

DimensionlessParams params(double eps) { return DimensionlessParams::from_detuning(eps, 0.45, 4, 0.01); }

// H0 written out independently of the library.
double h0_direct(double ell, double phi, const DimensionlessParams& p) {
  const double z = 2.0 * p.eta() * std::sqrt(p.N() * ell);
  return p.delta() * ell + p.epsilon() / (2.0 * p.eta() * p.eta()) * bessel_j(p.N(), z) *
                               std::cos(phi + std::numbers::pi * p.N() / 2.0);
}

// Upward crossings of phi through phi_ref, linearly interpolated.
std::vector<double> upward_crossings(const classical::ActionAngleTrajectory& t, double phi_ref) {
  std::vector<double> out;
  for (std::size_t k = 1; k < t.samples.size(); ++k) {
    const double f0 = t.samples[k - 1].phi - phi_ref, f1 = t.samples[k].phi - phi_ref;
    if (f0 < 0.0 && f1 >= 0.0) out.push_back(t.samples[k - 1].tau + (t.samples[k].tau - t.samples[k - 1].tau) * (-f0) / (f1 - f0));
  }
  return out;
}

}  // namespace

TEST_CASE("H0 evaluation") {
  const auto p = params(1.0);
  for (double ell : {0.5, 3.0, 12.0})
    for (double phi : {-2.0, 0.0, 1.1})
      CHECK(resonance_hamiltonian_h0({ell, phi, 0.0, true}, p) == Approx(h0_direct(ell, phi, p)).epsilon(1e-13));
}

TEST_CASE("the flow is Hamilton's equations of H0") {
  const auto p = params(2.0);
  const double h = 1e-6;
  for (double ell : {1.0, 6.0, 15.0})
    for (double phi : {-1.0, 0.4, 2.5}) {
      const auto f = nr_rhs(ell, phi, p);
      const double dH_dphi = (h0_direct(ell, phi + h, p) - h0_direct(ell, phi - h, p)) / (2.0 * h);
      const double dH_dell = (h0_direct(ell + h, phi, p) - h0_direct(ell - h, phi, p)) / (2.0 * h);
      CHECK(f[0] == Approx(-dH_dphi).epsilon(1e-7).scale(1.0));
      CHECK(f[1] == Approx(dH_dell).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("H0 is conserved along the flow") {
  const auto p = params(1.0);
  const auto t = integrate_nr({5.0, 0.3, 0.0, true}, p, 1000.0, 1.0, {1e-12, 1e-14});
  const double h0 = resonance_hamiltonian_h0(t.samples.front(), p);
  double drift = 0.0;
  for (const auto& a : t.samples) drift = std::max(drift, std::abs(resonance_hamiltonian_h0(a, p) - h0) / std::abs(h0));
  CHECK(drift < 1e-9);
}

TEST_CASE("fixed points") {
  const auto p = params(1.0);
  const auto pts = fixed_points(p);
  REQUIRE_FALSE(pts.empty());
  for (const auto& f : pts) {
    const auto r = nr_rhs(f.ell, f.phi, p);
    CHECK(std::abs(r[0]) < 1e-9);
    CHECK(std::abs(r[1]) < 1e-9);
  }
  const auto q = qnr_estimates(p);
  REQUIRE(q.island);
  const auto t = integrate_nr({q.elliptic.ell, q.elliptic.phi, 0.0, true}, p, 1000.0, 1.0, {1e-12, 1e-14});
  double dev = 0.0;
  for (const auto& a : t.samples) dev = std::max(dev, std::hypot(a.ell - q.elliptic.ell, a.phi - q.elliptic.phi));
  CHECK(dev < 1e-6);
}

TEST_CASE("the two separatrix width estimators agree") {
  for (double eps : {0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    CAPTURE(eps);
    const auto q = qnr_estimates(params(eps));
    REQUIRE(q.island);
    CHECK(std::abs(q.delta_n - q.delta_n_integrated) <= 1.0);
    CHECK(q.ell_inner < q.elliptic.ell);
    CHECK(q.ell_outer > q.elliptic.ell);
  }
}

TEST_CASE("small-oscillation frequency matches the observed libration period") {
  for (double eps : {0.1, 1.0, 5.0}) {
    CAPTURE(eps);
    const auto p = params(eps);
    const auto q = qnr_estimates(p);
    REQUIRE(q.island);
    const double T = 2.0 * std::numbers::pi / q.omega_ph;
    const auto t = integrate_nr({q.elliptic.ell * 1.001, q.elliptic.phi, 0.0, true}, p, 3.0 * T, T / 2000.0, {1e-12, 1e-14});
    const auto ups = upward_crossings(t, q.elliptic.phi);
    REQUIRE(ups.size() >= 2);
    CHECK((ups[1] - ups[0]) == Approx(T).epsilon(0.02));
  }
}

TEST_CASE("island shrinks monotonically as the driving vanishes") {
  double last_dn = std::numeric_limits<double>::infinity(), last_om = last_dn;
  for (int k = 0; k <= 16; ++k) {
    const double eps = 3.0 * std::pow(10.0, -k / 5.0);  // 3 down to 1.9e-3
    const auto q = qnr_estimates(params(eps));
    CAPTURE(eps);
    CHECK(q.delta_n <= last_dn);
    CHECK(q.omega_ph <= last_om);
    last_dn = q.delta_n;
    last_om = q.omega_ph;
  }
  const auto tiny = qnr_estimates(params(1e-3));
  CHECK_FALSE(tiny.island);
  CHECK(tiny.delta_n == 0.0);
  CHECK(tiny.omega_ph == 0.0);
  CHECK(tiny.message.find("no resonance island") != std::string::npos);
  CHECK_THROWS_AS(qnr_estimates(params(0.0)), std::invalid_argument);
}

TEST_CASE("weak driving: resonance flow tracks the exact flow on drive-averaged action") {
  const auto p = params(0.1);
  const auto q = qnr_estimates(p);
  REQUIRE(q.island);
  const double T = 2.0 * std::numbers::pi / q.omega_ph;
  const double dt = 0.01;
  const ActionAngleState a0{5.0, q.elliptic.phi, 0.0, true};
  const auto nr = integrate_nr(a0, p, T, dt, {1e-12, 1e-14});
  const auto ex = classical::integrate_exact_action_angle(a0, p, T, dt, {1e-12, 1e-14});
  REQUIRE(nr.samples.size() == ex.samples.size());
  // the dropped terms oscillate at multiples of mu / N; average over that period
  const auto window = static_cast<std::size_t>(std::lround(2.0 * std::numbers::pi * p.N() / p.mu() / dt));
  double raw = 0.0, averaged = 0.0;
  for (std::size_t k = 0; k < nr.samples.size(); ++k) raw = std::max(raw, std::abs(nr.samples[k].ell - ex.samples[k].ell));
  for (std::size_t k = 0; k + window < nr.samples.size(); k += 10) {
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < window; ++j) {
      a += ex.samples[k + j].ell;
      b += nr.samples[k + j].ell;
    }
    averaged = std::max(averaged, std::abs(a - b) / window);
  }
  CHECK(averaged < 0.08);
  CHECK(raw < 0.15);
}
