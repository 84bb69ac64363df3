#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ionchaos/params.hpp"
#include "ionchaos/raman.hpp"
#include "oracles/racah.hpp"

using namespace ionchaos::raman;
using doctest::Approx;

namespace {

const cplx I(0.0, 1.0);

int two_m(Sublevel s) { return s == Sublevel::one ? -1 : 1; }

double max_abs(const Eigen::Matrix3cd& m) { return m.cwiseAbs().maxCoeff(); }

ComplexFieldVector random_field(std::mt19937_64& rng, bool z_only = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexFieldVector E;
  E.Z = {g(rng), g(rng)};
  if (!z_only) {
    E.X = {g(rng), g(rng)};
    E.Y = {g(rng), g(rng)};
  }
  return E;
}

}  // namespace

TEST_CASE("3-j symbols") {
  const auto h = HalfInt::half(1);
  const auto one = HalfInt::whole(1);
  CHECK(wigner_3j(h, one, h, HalfInt::half(1), HalfInt::whole(0), HalfInt::half(-1)) ==
        Approx(oracle::racah_3j(1, 2, 1, 1, 0, -1)).epsilon(1e-14));
  CHECK(oracle::racah_3j(1, 2, 1, 1, 0, -1) == Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
  // sweep every projection for a few small j
  for (int j1 = 0; j1 <= 3; ++j1)
    for (int j2 = 0; j2 <= 3; ++j2)
      for (int j3 = 0; j3 <= 4; ++j3)
        for (int m1 = -j1; m1 <= j1; m1 += 2)
          for (int m2 = -j2; m2 <= j2; m2 += 2) {
            const int m3 = -m1 - m2;
            const double lib = wigner_3j(HalfInt{j1}, HalfInt{j2}, HalfInt{j3}, HalfInt{m1}, HalfInt{m2}, HalfInt{m3});
            CHECK(lib == Approx(oracle::racah_3j(j1, j2, j3, m1, m2, m3)).epsilon(1e-14).scale(1.0));
          }
  CHECK(wigner_3j(h, one, h, h, HalfInt::whole(1), h) == 0.0);
  CHECK(wigner_3j(h, h, HalfInt::whole(2), h, HalfInt::half(-1), HalfInt::whole(0)) == 0.0);
}

TEST_CASE("Lambda tensors: closed forms") {
  Eigen::Matrix3cd L11, L12;
  L11 << 1.0, -I, 0.0, I, 1.0, 0.0, 0.0, 0.0, 1.0;
  L12 << 0.0, 0.0, -1.0, 0.0, 0.0, -I, 1.0, I, 0.0;
  L11 /= 3.0;
  L12 /= 3.0;
  CHECK(max_abs(lambda_tensor(Sublevel::one, Sublevel::one) - L11) < 1e-15);
  CHECK(max_abs(lambda_tensor(Sublevel::one, Sublevel::two) - L12) < 1e-15);
  CHECK(max_abs(lambda_tensor(Sublevel::one, Sublevel::one) - lambda_tensor(Sublevel::two, Sublevel::two).conjugate()) < 1e-15);
  CHECK(max_abs(lambda_tensor(Sublevel::one, Sublevel::two) + lambda_tensor(Sublevel::two, Sublevel::one).conjugate()) < 1e-15);
}

TEST_CASE("Lambda tensors equal the 3-j sums") {
  for (Sublevel mu : {Sublevel::one, Sublevel::two})
    for (Sublevel nu : {Sublevel::one, Sublevel::two}) {
      const auto oracle_sum = oracle::lambda_sum(two_m(mu), two_m(nu));
      CHECK(max_abs(lambda_tensor(mu, nu) - oracle_sum) <= 1e-14);
      CHECK(max_abs(lambda_tensor_from_3j(mu, nu) - oracle_sum) <= 1e-14);
    }
}

TEST_CASE("field contractions match the expanded forms") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto E = random_field(rng);
    const Eigen::Vector3cd v = E.as_vector();
    auto contract = [&](Sublevel a, Sublevel b) {
      return (v.transpose() * lambda_tensor(a, b) * v.conjugate())(0, 0);
    };
    const double n2 = E.norm_squared();
    const double imxy = std::imag(E.X * std::conj(E.Y));
    CHECK(std::abs(contract(Sublevel::one, Sublevel::one) - (n2 + 2.0 * imxy) / 3.0) < 1e-13);
    CHECK(std::abs(contract(Sublevel::two, Sublevel::two) - (n2 - 2.0 * imxy) / 3.0) < 1e-13);
    const cplx c12 = (E.Z * (std::conj(E.X) + I * std::conj(E.Y)) - std::conj(E.Z) * (E.X + I * E.Y)) / 3.0;
    const cplx c21 = (-E.Z * (std::conj(E.X) - I * std::conj(E.Y)) + std::conj(E.Z) * (E.X - I * E.Y)) / 3.0;
    CHECK(std::abs(contract(Sublevel::one, Sublevel::two) - c12) < 1e-13);
    CHECK(std::abs(contract(Sublevel::two, Sublevel::one) - c21) < 1e-13);
  }
}

TEST_CASE("h coefficients") {
  const auto z = coupling_h({0.0, 0.0, cplx(3.0, 4.0)});
  CHECK(z.h0 == -25.0);
  CHECK(z.h1 == 0.0);
  CHECK(z.h2 == 0.0);
  CHECK(z.h3 == 0.0);

  const auto c = coupling_h({1.0, I, 0.0});
  CHECK(c.h0 == Approx(-2.0));
  CHECK(c.h1 == 0.0);
  CHECK(c.h2 == 0.0);
  CHECK(c.h3 == Approx(-2.0));

  const auto zero = coupling_h({});
  CHECK(zero.h0 == 0.0);
  CHECK(zero.h3 == 0.0);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const auto h = coupling_h(random_field(rng, true));
    CHECK(h.h1 == 0.0);
    CHECK(h.h2 == 0.0);
    CHECK(h.h3 == 0.0);
  }
}

TEST_CASE("kappa matrix is Hermitian and decomposes into the h coefficients") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 500; ++k) {
    const auto E = random_field(rng);
    const auto kappa = kappa_matrix(E);
    CHECK(std::abs(kappa(0, 1) - std::conj(kappa(1, 0))) < 1e-12);
    CHECK(std::abs(kappa(0, 0).imag()) < 1e-12);
    const auto a = coupling_from_kappa(kappa);
    const auto b = coupling_h(E);
    CHECK(a.h0 == Approx(b.h0).epsilon(1e-12).scale(1.0));
    CHECK(a.h1 == Approx(b.h1).epsilon(1e-12).scale(1.0));
    CHECK(a.h2 == Approx(b.h2).epsilon(1e-12).scale(1.0));
    CHECK(a.h3 == Approx(b.h3).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("standing wave potential") {
  const double chi_value = 2.5e-35;
  PlaneWave pump{cplx(1e5, 0.0), Eigen::Vector3d(1.5e7, 0.0, 0.0), 3.0e15};
  PlaneWave stokes{cplx(1e5, 0.0), Eigen::Vector3d(-1.5e7, 0.0, 0.0), 3.0e15 - 1.2e7};
  const Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  CHECK(standing_wave_potential(chi_value, pump, stokes, origin, 0.0) ==
        Approx(2.0 * chi_value * 1e10).epsilon(1e-14));

  // (k_p - k_s) x = pi / 2
  const Eigen::Vector3d quarter(std::numbers::pi / 2.0 / 3.0e7, 0.0, 0.0);
  CHECK(std::abs(standing_wave_potential(chi_value, pump, stokes, quarter, 0.0)) < 1e-15 * chi_value * 1e10);

  // period from successive upward zero crossings in t
  const double dw = pump.omega - stokes.omega;
  const Eigen::Vector3d r(1e-7, 0.0, 0.0);
  auto f = [&](double t) { return standing_wave_potential(chi_value, pump, stokes, r, t); };
  auto crossing = [&](double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double T = 2.0 * std::numbers::pi / dw;
  std::vector<double> ups;
  const int n = 4000;
  for (int k = 0; k < n && ups.size() < 6; ++k) {
    const double a = k * (3.0 * T / n), b = (k + 1) * (3.0 * T / n);
    if (f(a) < 0.0 && f(b) >= 0.0) ups.push_back(crossing(a, b));
  }
  REQUIRE(ups.size() >= 2);
  CHECK((ups[1] - ups[0]) == Approx(T).epsilon(1e-12));
}

TEST_CASE("coupling constant scale") {
  const ionchaos::PhysicalConfig cfg;
  const double c = chi(cfg.einstein_A, cfg.k0, cfg.detuning);
  CHECK(c == Approx(cfg.einstein_A * std::numbers::pi * ionchaos::constants::epsilon0 /
                    (4.0 * std::pow(cfg.k0, 3) * cfg.detuning)).epsilon(1e-14));
  // P = (c eps0 / 2) |E|^2 (pi w0^2 / 2)
  const double E = field_amplitude(cfg.laser_power, cfg.spot_size);
  const double P = 0.5 * ionchaos::constants::speed_of_light * ionchaos::constants::epsilon0 * E * E *
                   std::numbers::pi * cfg.spot_size * cfg.spot_size / 2.0;
  CHECK(P == Approx(cfg.laser_power).epsilon(1e-14));
}
