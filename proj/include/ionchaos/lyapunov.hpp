// Largest Lyapunov exponent by two-trajectory renormalization.
#pragma once

#include <string>

#include "ionchaos/classical.hpp"

namespace ionchaos::classical {

struct LyapunovOptions {
  double offset = 1e-8;            // initial companion displacement along xi
  double renorm_interval = 1.0;    // in tau
  double discard_fraction = 0.5;   // fraction of the run excluded from the rate
  double max_separation = 1e-3;    // renormalize early beyond this
  ode::Tolerances tol;
};

struct LyapunovResult {
  double exponent = 0.0;
  long renormalizations = 0;
  long early_renormalizations = 0;
  bool short_run = false;  // run shorter than 100 drive periods
  std::string warning;
};

LyapunovResult lyapunov_max(const ClassicalState& init, const DimensionlessParams& p,
                            double tau_total, const LyapunovOptions& opts = {});

}  // namespace ionchaos::classical
