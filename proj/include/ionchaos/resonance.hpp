/*
 * resonance.hpp - the single-harmonic nonlinear-resonance approximation
 *
 *   H0(ell, phi) = delta ell + (epsilon / 2 eta^2) J_N(z) cos(psi),
 *   z = 2 eta sqrt(N ell),  psi = phi + pi N / 2
 *
 * H0 is autonomous, so its level sets are the trajectories.  Fixed points
 * sit on sin(psi) = 0 where g(ell) = epsilon N J_N'(z) / z equals -delta cos(psi),
 * and on the zeros of J_N where cos(psi) = -delta / g.
 */
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ionchaos/classical.hpp"

namespace ionchaos::resonance {

double resonance_hamiltonian_h0(const classical::ActionAngleState& a, const DimensionlessParams& p);

/// (d ell/d tau, d phi/d tau) of the H0 flow.
Eigen::Vector2d nr_rhs(double ell, double phi, const DimensionlessParams& p);

classical::ActionAngleTrajectory integrate_nr(const classical::ActionAngleState& init,
                                              const DimensionlessParams& p, double tau_end,
                                              double dtau_out, ode::Tolerances tol = {});

enum class FixedPointKind { elliptic, hyperbolic };

struct FixedPoint {
  double ell = 0.0;
  double phi = 0.0;  // in (-pi, pi]
  double h0 = 0.0;
  FixedPointKind kind = FixedPointKind::elliptic;
};

struct QnrOptions {
  /// Fixed points are searched for z in [z_min, z_max].
  double z_min = 1e-3;
  double z_max = 40.0;
  double z_step = 5e-3;
  ode::Tolerances tol{1e-11, 1e-13};
};

struct QnrEstimates {
  bool island = false;
  std::string message;  // why there is no island
  FixedPoint elliptic;  // the dominant (lowest-action) island centre
  FixedPoint saddle;    // the saddle whose level set bounds it
  double ell_inner = 0.0, ell_outer = 0.0;  // separatrix crossings of the psi* line
  double delta_n = 0.0;                     // N (ell_outer - ell_inner), level sets
  double delta_n_integrated = 0.0;          // same width from separatrix integration
  double omega_ph = 0.0;                    // small-oscillation frequency at the centre
};

/// All fixed points of H0 with z in the search window, sorted by action.
std::vector<FixedPoint> fixed_points(const DimensionlessParams& p, const QnrOptions& opts = {});

QnrEstimates qnr_estimates(const DimensionlessParams& p, const QnrOptions& opts = {});

}  // namespace ionchaos::resonance
