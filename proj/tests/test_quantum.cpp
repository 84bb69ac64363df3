#include <doctest.h>

#include <cmath>
#include <random>

#include "ionchaos/classical.hpp"
#include "ionchaos/quantum.hpp"
#include "oracles/fock_rk78.hpp"
#include "oracles/hermite.hpp"
#include "oracles/perturbation.hpp"

using namespace ionchaos;
using namespace ionchaos::quantum;
using doctest::Approx;

namespace {

DimensionlessParams params(double eps) { return DimensionlessParams::from_detuning(eps, 0.45, 4, 0.01); }

QuantumState random_state(std::mt19937_64& rng, int levels, int nmax, double eta) {
  std::normal_distribution<double> g(0.0, 1.0);
  QuantumState s = QuantumState::ground(nmax, eta);
  s.amplitudes.setZero();
  for (int n = 0; n < levels; ++n) s.amplitudes[n] = cplx(g(rng), g(rng));
  s.amplitudes.normalize();
  return s;
}

}  // namespace

TEST_CASE("matrix elements: special values") {
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) CHECK(matrix_element_F(m, n, 0.0) == cplx(m == n ? 1.0 : 0.0, 0.0));
  CHECK(std::abs(matrix_element_F(0, 0, 0.45) - std::exp(-0.10125)) < 1e-12);
  CHECK(std::abs(oracle::quadrature_F(0, 0, 0.45) - std::exp(-0.10125)) < 1e-12);
  const cplx f10 = matrix_element_F(1, 0, 0.45);
  CHECK(f10.real() == 0.0);
  CHECK(std::abs(f10 - oracle::quadrature_F(1, 0, 0.45)) < 1e-12);
  CHECK(std::abs(matrix_element_F(0, 0, 0.45, KernelConvention::printed_kernel) - std::exp(-0.45 * 0.45)) < 1e-14);
  CHECK_THROWS(matrix_element_F(10001, 0, 0.45));
  CHECK_THROWS(matrix_element_F(-1, 0, 0.45));
}

TEST_CASE("matrix elements against quadrature") {
  for (double eta : {0.1, 0.45, 0.9}) {
    double worst = 0.0;
    for (int m = 0; m <= 40; ++m)
      for (int n = 0; n <= m; ++n) {
        const cplx f = matrix_element_F(m, n, eta);
        worst = std::max(worst, std::abs(f - oracle::quadrature_F(m, n, eta)));
        CHECK(f == matrix_element_F(n, m, eta));
      }
    CAPTURE(eta);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("high Fock numbers stay finite") {
  for (int n : {500, 2000, 9000}) {
    const cplx f = matrix_element_F(n, n + 3, 0.45);
    CHECK(std::isfinite(f.real()));
    CHECK(std::isfinite(f.imag()));
    CHECK(std::abs(f) <= 1.0);
  }
}

TEST_CASE("coupling matrix") {
  const auto id = build_coupling(30, 0.0);
  CHECK((id.dense() - Eigen::MatrixXcd::Identity(30, 30)).cwiseAbs().maxCoeff() == 0.0);
  const auto F = build_coupling(200, 0.45);
  CHECK(F.unitarity_defect() < 1e-8);
  CHECK((F.dense() - F.dense().transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int m = 0; m < 200; m += 17) {
    for (int n = 0; n < 200; ++n)
      if (n < F.band_lo(m) || n > F.band_hi(m)) CHECK(std::abs(F(m, n)) <= CoupledMatrix::band_threshold);
  }
  CHECK_THROWS(build_coupling(1, 0.45));
  CHECK(unitarity_guard(200, 0.45) >= 10);
}

TEST_CASE("generator is Hermitian") {
  const auto F = build_coupling(60, 0.45);
  for (double tau : {0.0, 0.37, 5.1, 29.9}) {
    const auto G = generator_matrix(F, params(7.5), tau);
    CHECK((G - G.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("observables") {
  const auto g = QuantumState::ground(20, 0.45);
  CHECK(xi_squared_expect(g) == Approx(0.45 * 0.45).epsilon(1e-15));
  CHECK(h_lo_expect(g) == Approx(0.45 * 0.45).epsilon(1e-15));
  CHECK(xi_expect(g) == 0.0);
  const auto f = QuantumState::fock(3, 20, 0.45);
  CHECK(probabilities(f)[3] == 1.0);
  CHECK(xi_squared_expect(f) == Approx(0.45 * 0.45 * 7.0).epsilon(1e-15));

  std::mt19937_64 rng(17);
  for (int k = 0; k < 5; ++k) {
    const auto s = random_state(rng, 10, 14, 0.45);
    std::vector<cplx> c(s.amplitudes.data(), s.amplitudes.data() + 10);
    CHECK(xi_squared_expect(s) == Approx(oracle::quadrature_xi2(c, 0.45)).epsilon(1e-8));
    double total = 0.0;
    for (double p : probabilities(s)) total += p;
    CHECK(total == Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("free evolution") {
  std::mt19937_64 rng(19);
  const auto init = random_state(rng, 8, 40, 0.45);
  const auto states = propagate(init, params(0.0), 20.0, 0.5);
  for (const auto& s : states) {
    for (int n = 0; n < 8; ++n) {
      CHECK(std::norm(s.amplitudes[n]) == Approx(std::norm(init.amplitudes[n])).epsilon(1e-14).scale(1.0));
      const cplx expected = init.amplitudes[n] * std::polar(1.0, -(n + 0.5) * s.tau);
      CHECK(std::abs(s.amplitudes[n] - expected) < 1e-12);
    }
  }
}

TEST_CASE("first-order perturbation theory at short times") {
  const auto p = params(1.0);
  PropagateOptions o;
  o.tol = {1e-13, 1e-15};
  const auto states = propagate(QuantumState::ground(40, 0.45), p, 0.1, 0.01, o);
  const cplx f10 = matrix_element_F(1, 0, 0.45);
  for (const auto& s : states) {
    if (s.tau == 0.0) continue;
    const double pt = oracle::first_order_p1(s.tau, 1.0, 0.45, p.mu(), f10);
    CHECK(std::norm(s.amplitudes[1]) == Approx(pt).epsilon(0.05));
  }
}

TEST_CASE("norm and truncation at moderate driving") {
  const auto p = params(1.0);
  PropagationInfo info200, info400;
  std::vector<double> p200, p400;
  info200 = propagate(QuantumState::ground(200, 0.45), p, 30.0, 0.01,
                      [&](const QuantumState& s) { p200.push_back(std::norm(s.amplitudes[0])); });
  info400 = propagate(QuantumState::ground(400, 0.45), p, 30.0, 0.01,
                      [&](const QuantumState& s) { p400.push_back(std::norm(s.amplitudes[0])); });
  CHECK(info200.max_norm_drift < 1e-8);
  CHECK(info200.doublings == 0);
  CHECK(std::abs(p200.back() - p400.back()) < 1e-6);
}

TEST_CASE("strong driving trace against an independent reference integration") {
  const auto p = params(7.5);
  std::vector<double> lib;
  const auto info = propagate(QuantumState::ground(200, 0.45), p, 30.0, 0.01,
                              [&](const QuantumState& s) { lib.push_back(std::norm(s.amplitudes[0])); });
  CHECK(info.max_norm_drift < 1e-8);
  const auto F = build_coupling(400, 0.45);
  const auto ref = oracle::ground_state_p0(F.dense(), 7.5, 0.45, p.mu(), 30.0, 0.01, 1e-12);
  REQUIRE(ref.size() == lib.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < lib.size(); ++k) worst = std::max(worst, std::abs(lib[k] - ref[k]));
  CHECK(worst < 1e-6);
  CHECK(lib.back() == Approx(0.0049041).epsilon(1e-3));
}

TEST_CASE("short-time Ehrenfest consistency") {
  const double eta = 0.45;
  for (double eps : {0.5, 1.0}) {
    const auto p = params(eps);
    std::vector<double> q;
    propagate(QuantumState::ground(60, eta), p, 5.0, 0.05, [&](const QuantumState& s) { q.push_back(xi_expect(s)); });
    const auto dressed = DimensionlessParams::from_detuning(eps * std::exp(-eta * eta / 2.0), eta, 4, 0.01);
    const auto c = classical::integrate_cartesian({0.0, 0.0, 0.0}, dressed, 5.0, 0.05);
    REQUIRE(c.samples.size() == q.size());
    double peak = 0.0, dev = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      peak = std::max(peak, std::abs(c.samples[k].xi));
      dev = std::max(dev, std::abs(c.samples[k].xi - q[k]));
    }
    CAPTURE(eps);
    CHECK(dev < 0.15 * peak);
  }
}

TEST_CASE("propagation preconditions") {
  CHECK_THROWS(propagate(QuantumState::ground(40, 0.3), params(1.0), 1.0, 0.1));
  auto bad = QuantumState::ground(40, 0.45);
  bad.amplitudes *= 2.0;
  CHECK_THROWS(propagate(bad, params(1.0), 1.0, 0.1));
}
