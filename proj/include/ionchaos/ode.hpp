/*
 * ode.hpp - embedded Runge-Kutta 5(4) (Dormand-Prince) with dense output
 *
 * Generic over Eigen column vectors (fixed or dynamic size, real or complex).
 * Step control follows Hairer/Norsett/Wanner (PI controller, beta = 0.04) and
 * the continuous extension is the usual 4th-order DOPRI5 interpolant.
 *
 * The stepper never steps past the target handed to advance_to(), so callers
 * can stop exactly on renormalization or section times and modify the state
 * before resuming (call reset() after any modification).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ionchaos::ode {

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct StepperOptions {
  Tolerances tol;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// Thrown when the step size collapses or the step budget is exhausted.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

template <class Vec>
class DormandPrince54 {
 public:
  using Rhs = std::function<void(double, const Vec&, Vec&)>;

  DormandPrince54(Rhs f, StepperOptions opts = {}) : f_(std::move(f)), opts_(opts) {}

  void reset(double t, const Vec& y) {
    t_ = t;
    t_old_ = t;
    y_ = y;
    have_k1_ = false;
    have_dense_ = false;
  }

  double time() const { return t_; }
  const Vec& state() const { return y_; }
  const StepStats& stats() const { return stats_; }
  const StepperOptions& options() const { return opts_; }

  /// Interpolated state on the last accepted step [t_old, t].
  Vec dense(double t) const {
    if (!have_dense_) return y_;
    const double h = t_ - t_old_;
    const double s = (t - t_old_) / h;
    const double s1 = 1.0 - s;
    return r1_ + s * (r2_ + s1 * (r3_ + s * (r4_ + s1 * r5_)));
  }

  /// Integrate to exactly t_target. `on_step()` is called after every accepted
  /// step (dense() is valid on [t_old, t] during the call); returning false
  /// stops early.
  template <class OnStep>
  void advance_to(double t_target, OnStep&& on_step) {
    const double dir = t_target >= t_ ? 1.0 : -1.0;
    if (t_target == t_) return;
    if (!have_k1_) {
      k1_ = y_;  // sizes dynamic vectors
      f_(t_, y_, k1_);
      ++stats_.rhs_evals;
      have_k1_ = true;
      if (h_ == 0.0 || std::signbit(h_) != std::signbit(dir)) h_ = initial_step(dir, t_target);
    }
    bool last = false;
    while (!last) {
      if (stats_.accepted + stats_.rejected >= opts_.max_steps)
        throw IntegrationError("step budget exhausted at t = " + std::to_string(t_), t_);
      double h = h_;
      if (std::abs(h) > opts_.h_max) h = dir * opts_.h_max;
      if (dir * (t_ + h - t_target) >= 0.0) {
        h = t_target - t_;
        last = true;
      }
      if (std::abs(h) <= 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_)))
        throw IntegrationError("step size underflow at t = " + std::to_string(t_), t_);

      const double err = attempt(h);
      if (err <= 1.0) {
        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(fac_old_, beta);
        fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
        double h_new = h / fac;
        fac_old_ = std::max(err, 1e-4);
        ++stats_.accepted;
        accept(h);
        if (reject_) h_new = dir * std::min(std::abs(h_new), std::abs(h));
        reject_ = false;
        // a clamped final step must not shrink the next run's first step
        if (!last || std::abs(h_new) > std::abs(h_)) h_ = h_new;
        if (!on_step()) return;
      } else {
        const double fac11 = std::pow(err, expo1);
        h_ = h / std::min(1.0 / fac_min, fac11 / safety);
        reject_ = true;
        last = false;
        ++stats_.rejected;
      }
    }
  }

  void advance_to(double t_target) {
    advance_to(t_target, [] { return true; });
  }

 private:
  static constexpr double beta = 0.04;
  static constexpr double expo1 = 0.2 - beta * 0.75;
  static constexpr double safety = 0.9;
  static constexpr double fac_min = 0.2;  // max shrink
  static constexpr double fac_max = 10.0;  // max growth

  template <class V>
  static double abs_max(const V& v) {
    return v.cwiseAbs().maxCoeff();
  }

  double initial_step(double dir, double t_target) {
    const auto& tol = opts_.tol;
    auto scale = [&](const Vec& y) {
      return (tol.atol + tol.rtol * y.cwiseAbs().array()).matrix();
    };
    const auto sk = scale(y_);
    const double n = static_cast<double>(y_.size());
    const double dnf = std::sqrt(k1_.cwiseAbs().cwiseQuotient(sk).squaredNorm() / n);
    const double dny = std::sqrt(y_.cwiseAbs().cwiseQuotient(sk).squaredNorm() / n);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, std::min(opts_.h_max, std::abs(t_target - t_)));
    Vec y1 = y_ + dir * h * k1_;
    Vec f1 = k1_;
    f_(t_ + dir * h, y1, f1);
    ++stats_.rhs_evals;
    const double der2 = std::sqrt((f1 - k1_).cwiseAbs().cwiseQuotient(sk).squaredNorm() / n) / h;
    const double der12 = std::max(std::abs(der2), dnf);
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, opts_.h_max, std::abs(t_target - t_)});
    return dir * h;
  }

  // One trial step of size h; leaves the candidate in y_new_ and k-stages filled.
  double attempt(double h) {
    constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
    constexpr double a21 = 0.2;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                     a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    tmp_ = y_ + h * a21 * k1_;
    k2_ = k1_;
    f_(t_ + c2 * h, tmp_, k2_);
    tmp_ = y_ + h * (a31 * k1_ + a32 * k2_);
    k3_ = k1_;
    f_(t_ + c3 * h, tmp_, k3_);
    tmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    k4_ = k1_;
    f_(t_ + c4 * h, tmp_, k4_);
    tmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    k5_ = k1_;
    f_(t_ + c5 * h, tmp_, k5_);
    tmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    k6_ = k1_;
    f_(t_ + h, tmp_, k6_);
    y_new_ = y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    k7_ = k1_;
    f_(t_ + h, y_new_, k7_);
    stats_.rhs_evals += 6;

    tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    const auto& tol = opts_.tol;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
      const double sk =
          tol.atol + tol.rtol * std::max(std::abs(y_[i]), std::abs(y_new_[i]));
      const double r = std::abs(tmp_[i]) / sk;
      sum += r * r;
    }
    const double err = std::sqrt(sum / static_cast<double>(y_.size()));
    if (!std::isfinite(err)) return std::numeric_limits<double>::infinity();
    return err;
  }

  void accept(double h) {
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    r1_ = y_;
    r2_ = y_new_ - y_;
    r3_ = h * k1_ - r2_;
    r4_ = r2_ - h * k7_ - r3_;
    r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
    have_dense_ = true;
    t_old_ = t_;
    t_ = t_ + h;
    y_.swap(y_new_);
    k1_.swap(k7_);  // FSAL
  }

  Rhs f_;
  StepperOptions opts_;
  StepStats stats_;
  double t_ = 0.0, t_old_ = 0.0, h_ = 0.0, fac_old_ = 1e-4;
  bool reject_ = false, have_k1_ = false, have_dense_ = false;
  Vec y_, y_new_, tmp_, k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  Vec r1_, r2_, r3_, r4_, r5_;
};

/// Integrate from (t0, y0) to t_end and hand the dense-output state at each
/// requested time (ascending, within [t0, t_end]) to `sink(index, t, y)`.
template <class Vec, class Sink>
StepStats integrate_sampled(typename DormandPrince54<Vec>::Rhs f, double t0, const Vec& y0,
                            double t_end, const std::vector<double>& times, Sink&& sink,
                            StepperOptions opts = {}) {
  DormandPrince54<Vec> stepper(std::move(f), opts);
  stepper.reset(t0, y0);
  std::size_t next = 0;
  while (next < times.size() && times[next] <= t0) sink(next, times[next], y0), ++next;
  stepper.advance_to(t_end, [&] {
    while (next < times.size() && times[next] <= stepper.time()) {
      const double t = times[next];
      if (t == stepper.time())
        sink(next, t, stepper.state());
      else
        sink(next, t, stepper.dense(t));
      ++next;
    }
    return true;
  });
  return stepper.stats();
}

/// t0, t0 + dt, ... up to and including t_end (within 1e-9 of a step).
/// Times are computed as t0 + k dt, never accumulated.
inline std::vector<double> uniform_grid(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample spacing must be > 0");
  if (!(t_end >= t0)) throw std::invalid_argument("end time precedes start time");
  const auto n = static_cast<std::size_t>(std::floor((t_end - t0) / dt + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = t0 + static_cast<double>(k) * dt;
  return t;
}

}  // namespace ionchaos::ode
