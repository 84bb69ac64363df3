#include "ionchaos/params.hpp"

#include <cmath>
#include <sstream>

namespace ionchaos {

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
}

int nearest_order(double mu) {
  const long r = std::lround(mu);
  return r < 1 ? 1 : static_cast<int>(r);
}

}  // namespace

DimensionlessParams::DimensionlessParams(double epsilon, double eta, int N, double delta)
    : epsilon_(epsilon), eta_(eta), N_(N), delta_(delta) {
  check_finite(epsilon, "epsilon");
  check_finite(eta, "eta");
  check_finite(delta, "delta");
  if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");
  // eta == 0 is a valid conversion result (beams perpendicular to the trap axis);
  // operations that need a finite Lamb-Dicke parameter call require_positive_eta.
  if (eta < 0.0) throw ParameterError("eta must be >= 0");
  if (N < 1) throw ParameterError("resonance order N must be >= 1");
}

DimensionlessParams DimensionlessParams::from_detuning(double epsilon, double eta, int N,
                                                       double delta) {
  return DimensionlessParams(epsilon, eta, N, delta);
}

DimensionlessParams DimensionlessParams::from_mu(double epsilon, double eta, double mu) {
  check_finite(mu, "mu");
  return from_mu(epsilon, eta, mu, nearest_order(mu));
}

DimensionlessParams DimensionlessParams::from_mu(double epsilon, double eta, double mu, int N) {
  check_finite(mu, "mu");
  return DimensionlessParams(epsilon, eta, N, static_cast<double>(N) - mu);
}

DimensionlessParams DimensionlessParams::with_epsilon(double epsilon) const {
  return DimensionlessParams(epsilon, eta_, N_, delta_);
}

DimensionlessParams DimensionlessParams::with_eta(double eta) const {
  return DimensionlessParams(epsilon_, eta, N_, delta_);
}

void DimensionlessParams::require_positive_eta(const char* what) const {
  if (!(eta_ > 0.0)) throw ParameterError(std::string(what) + " requires eta > 0");
}

void PhysicalConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
      throw ParameterError(std::string(name) + " must be finite and > 0");
  };
  positive(mass, "mass");
  positive(trap_omega, "trap_omega");
  positive(k0, "k0");
  positive(einstein_A, "einstein_A");
  positive(laser_power, "laser_power");
  positive(spot_size, "spot_size");
  positive(detuning, "detuning");
  positive(amplitude_ratio, "amplitude_ratio");
  positive(drive_omega, "drive_omega");
  if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi / 2.0)
    throw ParameterError("theta must lie in [0, pi/2]");
}

double beam_cosine(double theta) { return std::sin(std::numbers::pi / 2.0 - theta); }

double PhysicalConfig::effective_wavenumber() const { return 2.0 * k0 * beam_cosine(theta); }

DimensionlessParams derive_dimensionless(const PhysicalConfig& cfg) {
  cfg.validate();
  return derive_dimensionless(cfg, nearest_order(cfg.drive_omega / cfg.trap_omega));
}

DimensionlessParams derive_dimensionless(const PhysicalConfig& cfg, int N) {
  cfg.validate();
  const double c = beam_cosine(cfg.theta);
  const double k = 2.0 * cfg.k0 * c;
  const double eta = k * std::sqrt(constants::hbar / (2.0 * cfg.mass * cfg.trap_omega));
  const double w2 = cfg.trap_omega * cfg.trap_omega;
  const double epsilon =
      8.0 * cfg.einstein_A * cfg.laser_power * cfg.amplitude_ratio * c * c /
      (constants::speed_of_light * cfg.k0 * cfg.mass * w2 * cfg.spot_size * cfg.spot_size *
       cfg.detuning);
  return DimensionlessParams::from_mu(epsilon, eta, cfg.drive_omega / cfg.trap_omega, N);
}

double tau_to_seconds(double tau, double trap_omega) {
  if (!(trap_omega > 0.0)) throw ParameterError("trap_omega must be > 0");
  return tau / trap_omega;
}

double seconds_to_tau(double seconds, double trap_omega) {
  if (!(trap_omega > 0.0)) throw ParameterError("trap_omega must be > 0");
  return seconds * trap_omega;
}

std::string to_string(const DimensionlessParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "epsilon=" << p.epsilon() << " eta=" << p.eta() << " N=" << p.N()
     << " delta=" << p.delta() << " mu=" << p.mu();
  return os.str();
}

}  // namespace ionchaos
