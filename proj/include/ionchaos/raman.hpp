/*
 * raman.hpp - two-beam Raman coupling of a two-level (S1/2 -> P1/2) ion
 *
 * After adiabatic elimination of the upper manifold the lower-manifold
 * Hamiltonian is  H_I = h0 I + h_i sigma_i  with
 *
 *   kappa_{mu,nu} = -3 chi Lambda_ij(mu,nu) E_i E_j^*,   chi = A pi eps0 / (4 k0^3 Delta)
 *
 * Lambda is built from products of Wigner 3-j symbols; for S1/2 -> P1/2 it
 * has a simple closed form, and both routes are exposed here.  Field
 * components are in the internal quantization frame (Z along the magnetic
 * field), which is not the trap frame.
 */
#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

namespace ionchaos::raman {

using cplx = std::complex<double>;

/// Half-integer angular momentum quantum number stored as twice its value.
struct HalfInt {
  int twice = 0;
  static constexpr HalfInt half(int numerator) { return HalfInt{numerator}; }
  static constexpr HalfInt whole(int value) { return HalfInt{2 * value}; }
  double value() const { return 0.5 * twice; }
  bool operator==(const HalfInt&) const = default;
};

/// Racah closed formula; selection-rule violations return 0.
double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Lower-manifold sublevels: |1> = S1/2 m=-1/2, |2> = S1/2 m=+1/2.
enum class Sublevel { one = 1, two = 2 };

using LambdaTensor = Eigen::Matrix3cd;

/// Normalized spherical basis vector e^(q), q in {-1, 0, 1}.
Eigen::Vector3cd spherical_basis(int q);

LambdaTensor lambda_tensor(Sublevel mu, Sublevel nu);
/// (2J+1) sum over m_lambda, q, q' of 3-j products times e^(q) e^(q')^*.
LambdaTensor lambda_tensor_from_3j(Sublevel mu, Sublevel nu);

struct ComplexFieldVector {
  cplx X{0.0, 0.0};
  cplx Y{0.0, 0.0};
  cplx Z{0.0, 0.0};

  Eigen::Vector3cd as_vector() const { return {X, Y, Z}; }
  double norm_squared() const { return std::norm(X) + std::norm(Y) + std::norm(Z); }
};

/// h-coefficients in units of chi.
struct CouplingCoefficients {
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

CouplingCoefficients coupling_h(const ComplexFieldVector& E);

/// kappa_{mu,nu} in units of chi (2x2, row/col 0 <-> |1>).
Eigen::Matrix2cd kappa_matrix(const ComplexFieldVector& E);

/// h-coefficients obtained from the kappa matrix (Pauli decomposition).
CouplingCoefficients coupling_from_kappa(const Eigen::Matrix2cd& kappa);

/// chi = A pi eps0 / (4 k0^3 Delta), in J m^2 / V^2.
double chi(double einstein_A, double k0, double detuning);

/// Z-polarized plane wave E exp[-i(k.r - w t)].
struct PlaneWave {
  cplx amplitude{0.0, 0.0};    // V / m
  Eigen::Vector3d wavevector;  // 1 / m, trap frame
  double omega = 0.0;          // rad / s
};

/// Position/time dependent part of the two-beam interaction energy (J):
/// 2 chi |E_p E_s^*| cos[(k_p - k_s).r - (w_p - w_s) t + phi],  phi = Arg(E_p E_s^*).
double standing_wave_potential(double chi_value, const PlaneWave& pump, const PlaneWave& stokes,
                               const Eigen::Vector3d& position, double time);

/// Field amplitude |E| of a Gaussian beam of power P and 1/e^2 radius w0.
double field_amplitude(double power, double spot_size);

}  // namespace ionchaos::raman
