#include "ionchaos/raman.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ionchaos/params.hpp"

namespace ionchaos::raman {

namespace {

// n! for the small arguments that occur here (exact in double up to 22!).
double factorial(int n) {
  if (n < 0) throw std::logic_error("negative factorial argument");
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

bool integral(int twice) { return twice % 2 == 0; }

HalfInt m_of(Sublevel s) { return HalfInt::half(s == Sublevel::one ? -1 : 1); }

}  // namespace

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  const int J1 = j1.twice, J2 = j2.twice, J3 = j3.twice;
  const int M1 = m1.twice, M2 = m2.twice, M3 = m3.twice;
  if (J1 < 0 || J2 < 0 || J3 < 0) return 0.0;
  if (M1 + M2 + M3 != 0) return 0.0;
  if (std::abs(M1) > J1 || std::abs(M2) > J2 || std::abs(M3) > J3) return 0.0;
  if (!integral(J1 + M1) || !integral(J2 + M2) || !integral(J3 + M3)) return 0.0;
  if (J3 < std::abs(J1 - J2) || J3 > J1 + J2 || !integral(J1 + J2 + J3)) return 0.0;

  // All quantities below are integers once halved.
  const int a = (J1 + J2 - J3) / 2;
  const int b = (J1 - J2 + J3) / 2;
  const int c = (-J1 + J2 + J3) / 2;
  const int total = (J1 + J2 + J3) / 2;
  const double triangle = factorial(a) * factorial(b) * factorial(c) / factorial(total + 1);
  const double norm = factorial((J1 + M1) / 2) * factorial((J1 - M1) / 2) *
                      factorial((J2 + M2) / 2) * factorial((J2 - M2) / 2) *
                      factorial((J3 + M3) / 2) * factorial((J3 - M3) / 2);

  const int t1 = (J3 - J2 + M1) / 2;  // j3 - j2 + m1
  const int t2 = (J3 - J1 - M2) / 2;  // j3 - j1 - m2
  const int t3 = a;                   // j1 + j2 - j3
  const int t4 = (J1 - M1) / 2;       // j1 - m1
  const int t5 = (J2 + M2) / 2;       // j2 + m2
  const int kmin = std::max({0, -t1, -t2});
  const int kmax = std::min({t3, t4, t5});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double denom = factorial(k) * factorial(t1 + k) * factorial(t2 + k) *
                         factorial(t3 - k) * factorial(t4 - k) * factorial(t5 - k);
    sum += (k % 2 == 0 ? 1.0 : -1.0) / denom;
  }
  const int phase = (J1 - J2 - M3) / 2;  // j1 - j2 - m3, an integer
  const double sign = (phase % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(triangle * norm) * sum;
}

Eigen::Vector3cd spherical_basis(int q) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (q) {
    case 1:
      return Eigen::Vector3cd(cplx(-r, 0.0), cplx(0.0, r), cplx(0.0, 0.0));
    case 0:
      return Eigen::Vector3cd(cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0));
    case -1:
      return Eigen::Vector3cd(cplx(r, 0.0), cplx(0.0, r), cplx(0.0, 0.0));
    default:
      throw std::invalid_argument("spherical basis index must be -1, 0 or 1");
  }
}

LambdaTensor lambda_tensor(Sublevel mu, Sublevel nu) {
  const cplx i(0.0, 1.0);
  LambdaTensor L;
  if (mu == nu) {
    // (1,1) and its complex conjugate (2,2)
    L << 1.0, -i, 0.0,
         i, 1.0, 0.0,
         0.0, 0.0, 1.0;
    if (mu == Sublevel::two) L = L.conjugate().eval();
  } else {
    L << 0.0, 0.0, -1.0,
         0.0, 0.0, -i,
         1.0, i, 0.0;
    if (mu == Sublevel::two) L = (-L.conjugate()).eval();
  }
  return L / 3.0;
}

LambdaTensor lambda_tensor_from_3j(Sublevel mu, Sublevel nu) {
  const HalfInt j_lower = HalfInt::half(1);
  const HalfInt j_upper = HalfInt::half(1);
  const HalfInt one = HalfInt::whole(1);
  const HalfInt m_mu = m_of(mu), m_nu = m_of(nu);
  LambdaTensor L = LambdaTensor::Zero();
  for (int two_ml = -j_upper.twice; two_ml <= j_upper.twice; two_ml += 2) {
    const HalfInt ml{two_ml};
    for (int q = -1; q <= 1; ++q) {
      const double a = wigner_3j(j_lower, one, j_upper, HalfInt{-m_mu.twice}, HalfInt::whole(q), ml);
      if (a == 0.0) continue;
      for (int qp = -1; qp <= 1; ++qp) {
        const double b =
            wigner_3j(j_lower, one, j_upper, HalfInt{-m_nu.twice}, HalfInt::whole(qp), ml);
        if (b == 0.0) continue;
        L += a * b * spherical_basis(q) * spherical_basis(qp).adjoint();
      }
    }
  }
  return (j_upper.twice + 1) * L;
}

CouplingCoefficients coupling_h(const ComplexFieldVector& E) {
  return {-E.norm_squared(), 2.0 * std::imag(E.Z * std::conj(E.Y)),
          2.0 * std::imag(E.X * std::conj(E.Z)), 2.0 * std::imag(E.X * std::conj(E.Y))};
}

Eigen::Matrix2cd kappa_matrix(const ComplexFieldVector& E) {
  const Eigen::Vector3cd v = E.as_vector();
  const Sublevel levels[2] = {Sublevel::one, Sublevel::two};
  Eigen::Matrix2cd kappa;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      kappa(a, b) = -3.0 * (v.transpose() * lambda_tensor(levels[a], levels[b]) * v.conjugate())(0, 0);
  return kappa;
}

CouplingCoefficients coupling_from_kappa(const Eigen::Matrix2cd& k) {
  const cplx i(0.0, 1.0);
  return {std::real(0.5 * (k(0, 0) + k(1, 1))), std::real(0.5 * (k(0, 1) + k(1, 0))),
          std::real((k(0, 1) - k(1, 0)) / (2.0 * i)), std::real(0.5 * (k(1, 1) - k(0, 0)))};
}

double chi(double einstein_A, double k0, double detuning) {
  return einstein_A * std::numbers::pi * constants::epsilon0 / (4.0 * k0 * k0 * k0 * detuning);
}

double standing_wave_potential(double chi_value, const PlaneWave& pump, const PlaneWave& stokes,
                               const Eigen::Vector3d& position, double time) {
  const cplx product = pump.amplitude * std::conj(stokes.amplitude);
  const double phase = (pump.wavevector - stokes.wavevector).dot(position) -
                       (pump.omega - stokes.omega) * time + std::arg(product);
  return chi_value * 2.0 * std::abs(product) * std::cos(phase);
}

double field_amplitude(double power, double spot_size) {
  return std::sqrt(4.0 * power /
                   (constants::speed_of_light * constants::epsilon0 * std::numbers::pi *
                    spot_size * spot_size));
}

}  // namespace ionchaos::raman
