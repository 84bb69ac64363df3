/*
 * params.hpp - model parameters and unit conversions
 *
 * The trapped-ion model is governed by five dimensionless numbers:
 *
 *   epsilon = varepsilon k / (m w^2)     driving strength
 *   eta^2   = hbar k^2 / (2 m w)         Lamb-Dicke parameter (hbar_eff = 2 eta^2)
 *   mu      = Omega / w                  drive / trap frequency ratio
 *   N                                    resonance order (integer closest to mu)
 *   delta   = N - mu                     detuning from the N-th resonance
 *
 * PhysicalConfig holds the SI description of a lab setup (Ca+ defaults) from
 * which these follow.  Dimensionless time is tau = w t.
 */
#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace ionchaos {

namespace constants {
// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double speed_of_light = 299792458.0;   // m / s
inline constexpr double epsilon0 = 8.8541878128e-12;    // F / m
}  // namespace constants

/// Raised when a parameter set violates the model's invariants.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionlessParams {
 public:
  /// Detuning-first construction; mu is derived as N - delta.
  static DimensionlessParams from_detuning(double epsilon, double eta, int N, double delta);
  /// Frequency-ratio construction; N defaults to the nearest integer to mu.
  static DimensionlessParams from_mu(double epsilon, double eta, double mu);
  static DimensionlessParams from_mu(double epsilon, double eta, double mu, int N);

  double epsilon() const { return epsilon_; }
  double eta() const { return eta_; }
  int N() const { return N_; }
  double delta() const { return delta_; }
  double mu() const { return static_cast<double>(N_) - delta_; }
  double hbar_eff() const { return 2.0 * eta_ * eta_; }

  DimensionlessParams with_epsilon(double epsilon) const;
  DimensionlessParams with_eta(double eta) const;

  /// Throws ParameterError unless eta > 0 (needed by every operation that divides by eta).
  void require_positive_eta(const char* what) const;

  bool operator==(const DimensionlessParams&) const = default;

 private:
  DimensionlessParams(double epsilon, double eta, int N, double delta);

  double epsilon_;
  double eta_;
  int N_;
  double delta_;  // mu is derived, so delta + mu == N holds exactly
};

/// SI description of the ion, trap and Raman beam pair.  Defaults are the
/// singly ionized calcium setup on the S1/2 - P1/2 line at 397 nm.
struct PhysicalConfig {
  double mass = 6.64e-26;                                   // kg
  double trap_omega = 2.0 * std::numbers::pi * 500e3;       // rad / s
  double k0 = 1.58e7;                                       // 1 / m
  double einstein_A = 1.30e8;                               // 1 / s
  double laser_power = 10e-3;                               // W
  double spot_size = 20e-6;                                 // m, 1/e^2 intensity radius
  double detuning = 2.0 * std::numbers::pi * 1.0e9;         // rad / s
  double theta = 0.0;                                       // rad, beam half angle
  double amplitude_ratio = 1.0;                             // |E_s| / |E_p|
  double drive_omega = 3.99 * 2.0 * std::numbers::pi * 500e3;  // rad / s

  /// Throws ParameterError naming the first offending field.
  void validate() const;

  /// Effective wavevector projection on the trap axis, k = 2 k0 cos(theta).
  double effective_wavenumber() const;
};

/// cos(theta), exact zero at the double nearest pi/2.
double beam_cosine(double theta);

DimensionlessParams derive_dimensionless(const PhysicalConfig& cfg);
/// Same, with the resonance order fixed by the caller instead of rounded from mu.
DimensionlessParams derive_dimensionless(const PhysicalConfig& cfg, int N);

double tau_to_seconds(double tau, double trap_omega);
double seconds_to_tau(double seconds, double trap_omega);

std::string to_string(const DimensionlessParams& p);

}  // namespace ionchaos
