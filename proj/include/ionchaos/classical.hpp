/*
 * classical.hpp - classical driven-oscillator dynamics
 *
 * Cartesian form (tau = w t, xi = k x, v = dxi/dtau):
 *
 *   xi'' + xi = epsilon sin(xi - mu tau)
 *
 * Action-angle form, obtained from the time-dependent canonical transform
 *
 *   xi = z cos Phi,  v = -z sin Phi,  z = 2 eta sqrt(N ell),  Phi = (phi + mu tau) / N
 *
 * with Hamiltonian  H = delta ell + (epsilon / 2 eta^2) cos(z cos Phi - mu tau).
 * In the Cartesian frame the same system has
 *
 *   H_cart = (xi^2 + v^2) / (4 eta^2) + (epsilon / 2 eta^2) cos(xi - mu tau)
 *
 * and the two differ by mu ell.  The Cartesian flow does not depend on eta;
 * eta only sets the scale of the action.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ionchaos/ode.hpp"
#include "ionchaos/params.hpp"

namespace ionchaos::classical {

/// Below this action the 1/sqrt(ell) terms of the angle equation are not trusted.
inline constexpr double ell_min = 1e-6;

struct ClassicalState {
  double xi = 0.0;
  double v = 0.0;
  double tau = 0.0;
};

struct ActionAngleState {
  double ell = 0.0;
  double phi = 0.0;  // unwrapped
  double tau = 0.0;
  bool phase_defined = true;  // false at the phase-space origin

  /// Bessel argument z = 2 eta sqrt(N ell).
  double z(const DimensionlessParams& p) const;
  /// phi wrapped into (-pi, pi], for plotting.
  double wrapped_phi() const;
};

struct IntegratorInfo {
  std::string method = "dopri5";
  ode::Tolerances tol;
  ode::StepStats stats;
};

template <class State>
struct Trajectory {
  std::vector<State> samples;
  double dtau = 0.0;
  IntegratorInfo info;
};

using CartesianTrajectory = Trajectory<ClassicalState>;
using ActionAngleTrajectory = Trajectory<ActionAngleState>;

/// The action dropped below ell_min during an action-angle integration.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

// --- Cartesian ----------------------------------------------------------

/// Right-hand side of the first-order system (xi, v).
Eigen::Vector2d cartesian_rhs(double tau, const Eigen::Vector2d& y, const DimensionlessParams& p);

CartesianTrajectory integrate_cartesian(const ClassicalState& init, const DimensionlessParams& p,
                                        double tau_end, double dtau_out,
                                        ode::Tolerances tol = {});

/// Cartesian-frame Hamiltonian in units of hbar w (needs eta > 0).
double hamiltonian_cartesian(const ClassicalState& s, const DimensionlessParams& p);

// --- canonical transform --------------------------------------------------

ActionAngleState to_action_angle(const ClassicalState& s, const DimensionlessParams& p);
/// Same, choosing the 2 pi N branch of phi closest to `phi_reference`.
ActionAngleState to_action_angle(const ClassicalState& s, const DimensionlessParams& p,
                                 double phi_reference);
ClassicalState from_action_angle(const ActionAngleState& a, const DimensionlessParams& p);

/// Rotating-frame Hamiltonian  delta ell + (epsilon/2 eta^2) cos(z cos Phi - mu tau).
double hamiltonian_action_angle(const ActionAngleState& a, const DimensionlessParams& p);

/// (d ell/d tau, d phi/d tau) of the exact rotating-frame flow.
Eigen::Vector2d exact_action_angle_rhs(double tau, double ell, double phi,
                                       const DimensionlessParams& p);

ActionAngleTrajectory integrate_exact_action_angle(const ActionAngleState& init,
                                                   const DimensionlessParams& p, double tau_end,
                                                   double dtau_out, ode::Tolerances tol = {});

/// Map every sample through from_action_angle.
CartesianTrajectory to_cartesian(const ActionAngleTrajectory& traj, const DimensionlessParams& p);

// --- Poincare sections ----------------------------------------------------

struct PoincareOptions {
  int n_periods = 500;
  /// Sections at tau_k = init.tau + phase + 2 pi k / mu, k = 1..n_periods.
  double phase = 0.0;
  ode::Tolerances tol;
};

struct PoincareSet {
  std::vector<ClassicalState> points;
  double drive_period = 0.0;
};

/// One section per initial condition; a failure is reported for that
/// trajectory only.
struct PoincareResult {
  std::optional<PoincareSet> set;
  std::string error;
};

PoincareSet poincare_section(const ClassicalState& init, const DimensionlessParams& p,
                             const PoincareOptions& opts = {});

std::vector<PoincareResult> poincare_sections(const std::vector<ClassicalState>& inits,
                                              const DimensionlessParams& p,
                                              const PoincareOptions& opts = {}, int workers = 1);

}  // namespace ionchaos::classical
