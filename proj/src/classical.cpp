#include "ionchaos/classical.hpp"

#include <cmath>
#include <numbers>

#include "ionchaos/parallel.hpp"

namespace ionchaos::classical {

namespace {

using Vec2 = Eigen::Vector2d;
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_time_grid(double tau0, double tau_end, double dtau_out) {
  if (!(tau_end > tau0)) throw std::invalid_argument("tau_end must exceed the initial time");
  if (!(dtau_out > 0.0)) throw std::invalid_argument("dtau_out must be > 0");
}

}  // namespace

double ActionAngleState::z(const DimensionlessParams& p) const {
  return 2.0 * p.eta() * std::sqrt(p.N() * ell);
}

double ActionAngleState::wrapped_phi() const { return std::remainder(phi, two_pi); }

Vec2 cartesian_rhs(double tau, const Vec2& y, const DimensionlessParams& p) {
  return {y[1], -y[0] + p.epsilon() * std::sin(y[0] - p.mu() * tau)};
}

CartesianTrajectory integrate_cartesian(const ClassicalState& init, const DimensionlessParams& p,
                                        double tau_end, double dtau_out, ode::Tolerances tol) {
  check_time_grid(init.tau, tau_end, dtau_out);
  const auto times = ode::uniform_grid(init.tau, tau_end, dtau_out);
  CartesianTrajectory traj;
  traj.dtau = dtau_out;
  traj.info.tol = tol;
  traj.samples.resize(times.size());
  auto rhs = [p](double t, const Vec2& y, Vec2& dy) { dy = cartesian_rhs(t, y, p); };
  traj.info.stats = ode::integrate_sampled<Vec2>(
      rhs, init.tau, Vec2(init.xi, init.v), times.back(), times,
      [&](std::size_t i, double t, const Vec2& y) { traj.samples[i] = {y[0], y[1], t}; },
      ode::StepperOptions{tol});
  return traj;
}

double hamiltonian_cartesian(const ClassicalState& s, const DimensionlessParams& p) {
  p.require_positive_eta("hamiltonian_cartesian");
  const double e2 = p.eta() * p.eta();
  return (s.xi * s.xi + s.v * s.v) / (4.0 * e2) +
         p.epsilon() / (2.0 * e2) * std::cos(s.xi - p.mu() * s.tau);
}

ActionAngleState to_action_angle(const ClassicalState& s, const DimensionlessParams& p) {
  p.require_positive_eta("to_action_angle");
  ActionAngleState a;
  a.tau = s.tau;
  a.ell = (s.xi * s.xi + s.v * s.v) / (4.0 * p.eta() * p.eta() * p.N());
  if (s.xi == 0.0 && s.v == 0.0) {
    a.phi = 0.0;
    a.phase_defined = false;
    return a;
  }
  const double big_phi = std::atan2(-s.v, s.xi);
  a.phi = p.N() * big_phi - p.mu() * s.tau;
  return a;
}

ActionAngleState to_action_angle(const ClassicalState& s, const DimensionlessParams& p,
                                 double phi_reference) {
  ActionAngleState a = to_action_angle(s, p);
  if (!a.phase_defined) {
    a.phi = phi_reference;
    return a;
  }
  const double branch = two_pi * p.N();
  a.phi += branch * std::round((phi_reference - a.phi) / branch);
  return a;
}

ClassicalState from_action_angle(const ActionAngleState& a, const DimensionlessParams& p) {
  if (a.ell < 0.0) throw std::domain_error("from_action_angle: negative action");
  const double z = a.z(p);
  const double big_phi = (a.phi + p.mu() * a.tau) / p.N();
  return {z * std::cos(big_phi), -z * std::sin(big_phi), a.tau};
}

double hamiltonian_action_angle(const ActionAngleState& a, const DimensionlessParams& p) {
  p.require_positive_eta("hamiltonian_action_angle");
  const double big_phi = (a.phi + p.mu() * a.tau) / p.N();
  return p.delta() * a.ell + p.epsilon() / (2.0 * p.eta() * p.eta()) *
                                 std::cos(a.z(p) * std::cos(big_phi) - p.mu() * a.tau);
}

Vec2 exact_action_angle_rhs(double tau, double ell, double phi, const DimensionlessParams& p) {
  const double eta = p.eta();
  const double N = p.N();
  const double mu = p.mu();
  const double big_phi = (phi + mu * tau) / N;
  const double z = 2.0 * eta * std::sqrt(N * ell);
  const double s = std::sin(z * std::cos(big_phi) - mu * tau);
  const double dell = -p.epsilon() / eta * std::sqrt(ell / N) * s * std::sin(big_phi);
  const double dphi = p.delta() - p.epsilon() / (2.0 * eta) * std::sqrt(N / ell) * s * std::cos(big_phi);
  return {dell, dphi};
}

ActionAngleTrajectory integrate_exact_action_angle(const ActionAngleState& init,
                                                   const DimensionlessParams& p, double tau_end,
                                                   double dtau_out, ode::Tolerances tol) {
  p.require_positive_eta("integrate_exact_action_angle");
  check_time_grid(init.tau, tau_end, dtau_out);
  if (!(init.ell > ell_min))
    throw SingularityError("initial action below ell_min; use the Cartesian representation",
                           init.tau);
  const auto times = ode::uniform_grid(init.tau, tau_end, dtau_out);
  ActionAngleTrajectory traj;
  traj.dtau = dtau_out;
  traj.info.tol = tol;
  traj.samples.resize(times.size());

  auto rhs = [p](double t, const Vec2& y, Vec2& dy) {
    dy = exact_action_angle_rhs(t, y[0], y[1], p);
  };
  ode::DormandPrince54<Vec2> stepper(rhs, ode::StepperOptions{tol});
  stepper.reset(init.tau, Vec2(init.ell, init.phi));
  std::size_t next = 0;
  auto emit = [&](double t, const Vec2& y) {
    traj.samples[next++] = ActionAngleState{y[0], y[1], t, true};
  };
  emit(times[0], stepper.state());
  stepper.advance_to(times.back(), [&] {
    if (stepper.state()[0] < ell_min)
      throw SingularityError("action fell below ell_min at tau = " + std::to_string(stepper.time()),
                             stepper.time());
    while (next < times.size() && times[next] <= stepper.time())
      emit(times[next], times[next] == stepper.time() ? stepper.state() : stepper.dense(times[next]));
    return true;
  });
  traj.info.stats = stepper.stats();
  return traj;
}

CartesianTrajectory to_cartesian(const ActionAngleTrajectory& traj, const DimensionlessParams& p) {
  CartesianTrajectory out;
  out.dtau = traj.dtau;
  out.info = traj.info;
  out.samples.reserve(traj.samples.size());
  for (const auto& a : traj.samples) out.samples.push_back(from_action_angle(a, p));
  return out;
}

PoincareSet poincare_section(const ClassicalState& init, const DimensionlessParams& p,
                             const PoincareOptions& opts) {
  if (!(p.mu() > 0.0)) throw std::invalid_argument("poincare_section requires mu > 0");
  if (opts.n_periods < 1) throw std::invalid_argument("poincare_section requires n_periods >= 1");
  PoincareSet set;
  set.drive_period = two_pi / p.mu();
  std::vector<double> times(static_cast<std::size_t>(opts.n_periods));
  for (int k = 1; k <= opts.n_periods; ++k)
    times[static_cast<std::size_t>(k - 1)] = init.tau + opts.phase + k * set.drive_period;
  if (times.front() <= init.tau) throw std::invalid_argument("section phase precedes the initial time");
  set.points.resize(times.size());
  auto rhs = [p](double t, const Vec2& y, Vec2& dy) { dy = cartesian_rhs(t, y, p); };
  ode::integrate_sampled<Vec2>(
      rhs, init.tau, Vec2(init.xi, init.v), times.back(), times,
      [&](std::size_t i, double t, const Vec2& y) { set.points[i] = {y[0], y[1], t}; },
      ode::StepperOptions{opts.tol});
  return set;
}

std::vector<PoincareResult> poincare_sections(const std::vector<ClassicalState>& inits,
                                              const DimensionlessParams& p,
                                              const PoincareOptions& opts, int workers) {
  return parallel_map<PoincareResult>(inits.size(), workers, [&](std::size_t i) {
    PoincareResult r;
    try {
      r.set = poincare_section(inits[i], p, opts);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  });
}

}  // namespace ionchaos::classical
