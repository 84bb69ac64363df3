#include "ionchaos/lyapunov.hpp"

#include <cmath>
#include <numbers>

namespace ionchaos::classical {

namespace {

using Vec4 = Eigen::Vector4d;

double separation(const Vec4& y) { return std::hypot(y[2] - y[0], y[3] - y[1]); }

// companion placed back at distance d0 along the current separation direction
void renormalize(Vec4& y, double d, double d0) {
  const double s = d0 / d;
  y[2] = y[0] + s * (y[2] - y[0]);
  y[3] = y[1] + s * (y[3] - y[1]);
}

}  // namespace

LyapunovResult lyapunov_max(const ClassicalState& init, const DimensionlessParams& p,
                            double tau_total, const LyapunovOptions& opts) {
  if (!(tau_total > 0.0)) throw std::invalid_argument("tau_total must be > 0");
  if (!(opts.offset > 0.0) || !(opts.renorm_interval > 0.0) || !(opts.max_separation > opts.offset))
    throw std::invalid_argument("invalid Lyapunov options");
  if (!(opts.discard_fraction >= 0.0 && opts.discard_fraction < 1.0))
    throw std::invalid_argument("discard_fraction must lie in [0, 1)");

  LyapunovResult res;
  if (p.mu() > 0.0 && tau_total < 100.0 * 2.0 * std::numbers::pi / p.mu()) {
    res.short_run = true;
    res.warning = "run shorter than 100 drive periods";
  }

  auto rhs = [p](double t, const Vec4& y, Vec4& dy) {
    const double eps = p.epsilon(), ph = p.mu() * t;
    dy << y[1], -y[0] + eps * std::sin(y[0] - ph), y[3], -y[2] + eps * std::sin(y[2] - ph);
  };
  ode::DormandPrince54<Vec4> stepper(rhs, ode::StepperOptions{opts.tol});
  const double d0 = opts.offset;
  Vec4 y(init.xi, init.v, init.xi + d0, init.v);
  stepper.reset(init.tau, y);

  const auto n_intervals = static_cast<long>(std::ceil(tau_total / opts.renorm_interval - 1e-9));
  const auto k_start = static_cast<long>(std::floor(opts.discard_fraction * n_intervals));
  double log_sum = 0.0, log_at_start = 0.0, tau_start = init.tau;
  for (long k = 1; k <= n_intervals; ++k) {
    const double target = std::min(init.tau + k * opts.renorm_interval, init.tau + tau_total);
    while (stepper.time() < target) {
      bool early = false;
      stepper.advance_to(target, [&] {
        early = separation(stepper.state()) > opts.max_separation;
        return !early;
      });
      y = stepper.state();
      const double d = separation(y);
      if (!std::isfinite(d) || d == 0.0)
        throw ode::IntegrationError("degenerate companion separation", stepper.time());
      log_sum += std::log(d / d0);
      renormalize(y, d, d0);
      stepper.reset(stepper.time(), y);
      ++res.renormalizations;
      if (early) ++res.early_renormalizations;
    }
    if (k == k_start) {
      log_at_start = log_sum;
      tau_start = stepper.time();
    }
  }
  res.exponent = (log_sum - log_at_start) / (stepper.time() - tau_start);
  return res;
}

}  // namespace ionchaos::classical
