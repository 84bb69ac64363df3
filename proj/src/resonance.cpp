#include "ionchaos/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <boost/math/tools/roots.hpp>

#include "ionchaos/bessel.hpp"

namespace ionchaos::resonance {

namespace {

using classical::ActionAngleState;
using Vec2 = Eigen::Vector2d;
constexpr double pi = std::numbers::pi;

struct BesselTriple {
  double j, jp, jpp;
};

BesselTriple bessel_triple(int n, double z) {
  const auto seq = bessel_j_sequence(n + 1, z);
  const double j = seq[static_cast<std::size_t>(n)];
  const double jm = n == 0 ? -seq[1] : seq[static_cast<std::size_t>(n - 1)];
  const double jp = 0.5 * (jm - seq[static_cast<std::size_t>(n + 1)]);
  const double jpp = -jp / z - (1.0 - double(n) * n / (z * z)) * j;
  return {j, jp, jpp};
}

double psi_offset(const DimensionlessParams& p) { return 0.5 * pi * p.N(); }

double wrap(double x) { return std::remainder(x, 2.0 * pi); }

double z_to_ell(double z, const DimensionlessParams& p) {
  return z * z / (4.0 * p.eta() * p.eta() * p.N());
}

double ell_to_z(double ell, const DimensionlessParams& p) {
  return 2.0 * p.eta() * std::sqrt(p.N() * ell);
}

double h0_psi(double ell, double psi, const DimensionlessParams& p) {
  return p.delta() * ell + p.epsilon() / (2.0 * p.eta() * p.eta()) *
                               bessel_j(p.N(), ell_to_z(ell, p)) * std::cos(psi);
}

/// Second derivatives of H0 in (ell, psi).
struct Hessian {
  double ll, lp, pp;
};

Hessian hessian(double ell, double psi, const DimensionlessParams& p) {
  const int N = p.N();
  const double z = ell_to_z(ell, p);
  const auto b = bessel_triple(N, z);
  const double c = p.epsilon() / (2.0 * p.eta() * p.eta());
  const double A2 = 4.0 * p.eta() * p.eta() * N;
  const double dz = A2 / (2.0 * z);          // dz/d ell
  const double d2z = -A2 * A2 / (4.0 * z * z * z);
  const double j_ll = b.jpp * dz * dz + b.jp * d2z;
  return {c * j_ll * std::cos(psi), -c * b.jp * dz * std::sin(psi), -c * b.j * std::cos(psi)};
}

template <class F>
std::optional<double> bracket_root(F&& f, double lo, double hi) {
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
  boost::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

FixedPoint make_point(double z, double psi, const DimensionlessParams& p) {
  FixedPoint fp;
  fp.ell = z_to_ell(z, p);
  fp.phi = wrap(psi - psi_offset(p));
  fp.h0 = h0_psi(fp.ell, psi, p);
  const auto h = hessian(fp.ell, psi, p);
  fp.kind = h.ll * h.pp - h.lp * h.lp > 0.0 ? FixedPointKind::elliptic : FixedPointKind::hyperbolic;
  return fp;
}

double psi_of(const FixedPoint& fp, const DimensionlessParams& p) {
  return wrap(fp.phi + psi_offset(p));
}

}  // namespace

double resonance_hamiltonian_h0(const ActionAngleState& a, const DimensionlessParams& p) {
  p.require_positive_eta("resonance_hamiltonian_h0");
  return h0_psi(a.ell, a.phi + psi_offset(p), p);
}

Vec2 nr_rhs(double ell, double phi, const DimensionlessParams& p) {
  const int N = p.N();
  const double z = ell_to_z(ell, p);
  const auto b = bessel_triple(N, z);
  const double psi = phi + psi_offset(p);
  const double c = p.epsilon() / (2.0 * p.eta() * p.eta());
  const double g = p.epsilon() * N * b.jp / z;
  return {c * b.j * std::sin(psi), p.delta() + g * std::cos(psi)};
}

classical::ActionAngleTrajectory integrate_nr(const ActionAngleState& init,
                                              const DimensionlessParams& p, double tau_end,
                                              double dtau_out, ode::Tolerances tol) {
  p.require_positive_eta("integrate_nr");
  if (!(tau_end > init.tau)) throw std::invalid_argument("tau_end must exceed the initial time");
  if (!(init.ell > classical::ell_min))
    throw classical::SingularityError("initial action below ell_min", init.tau);
  const auto times = ode::uniform_grid(init.tau, tau_end, dtau_out);
  classical::ActionAngleTrajectory traj;
  traj.dtau = dtau_out;
  traj.info.tol = tol;
  traj.samples.resize(times.size());
  ode::DormandPrince54<Vec2> stepper(
      [p](double, const Vec2& y, Vec2& dy) { dy = nr_rhs(y[0], y[1], p); }, ode::StepperOptions{tol});
  stepper.reset(init.tau, Vec2(init.ell, init.phi));
  std::size_t next = 0;
  auto emit = [&](double t, const Vec2& y) {
    traj.samples[next++] = ActionAngleState{y[0], y[1], t, true};
  };
  emit(times[0], stepper.state());
  stepper.advance_to(times.back(), [&] {
    if (stepper.state()[0] < classical::ell_min)
      throw classical::SingularityError(
          "action fell below ell_min at tau = " + std::to_string(stepper.time()), stepper.time());
    while (next < times.size() && times[next] <= stepper.time())
      emit(times[next], times[next] == stepper.time() ? stepper.state() : stepper.dense(times[next]));
    return true;
  });
  traj.info.stats = stepper.stats();
  return traj;
}

std::vector<FixedPoint> fixed_points(const DimensionlessParams& p, const QnrOptions& opts) {
  p.require_positive_eta("fixed_points");
  if (!(opts.z_min > 0.0 && opts.z_max > opts.z_min && opts.z_step > 0.0))
    throw std::invalid_argument("invalid fixed-point search window");
  const int N = p.N();
  const double eps = p.epsilon(), delta = p.delta();
  std::vector<FixedPoint> out;
  if (eps == 0.0) return out;

  auto g = [&](double z) { return eps * N * bessel_triple(N, z).jp / z; };
  auto jn = [&](double z) { return bessel_j(N, z); };
  const auto n_steps = static_cast<std::size_t>(std::ceil((opts.z_max - opts.z_min) / opts.z_step));
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double lo = opts.z_min + double(i) * opts.z_step;
    const double hi = std::min(opts.z_max, lo + opts.z_step);
    // sin(psi) = 0 branch: delta + s g(z) = 0 with psi = 0 (s = 1) or pi (s = -1)
    for (int s : {1, -1}) {
      if (auto z = bracket_root([&](double x) { return delta + s * g(x); }, lo, hi);
          z && *z < hi)
        out.push_back(make_point(*z, s == 1 ? 0.0 : pi, p));
    }
    // zeros of J_N with cos(psi) = -delta / g
    if (auto z = bracket_root(jn, lo, hi); z && *z < hi && *z > opts.z_min) {
      const double gz = g(*z);
      if (std::abs(delta) <= std::abs(gz)) {
        const double psi = std::acos(-delta / gz);
        out.push_back(make_point(*z, psi, p));
        if (psi != 0.0 && psi != pi) out.push_back(make_point(*z, -psi, p));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const FixedPoint& a, const FixedPoint& b) {
    return a.ell != b.ell ? a.ell < b.ell : a.phi < b.phi;
  });
  return out;
}

namespace {

/// First ell along the psi line, walking from ell0 in direction dir, where
/// H0 reaches level; nullopt if the walk leaves [0, ell_max] first.
std::optional<double> level_crossing(double ell0, double psi, double level, int dir, double ell_max,
                                     double step, const DimensionlessParams& p) {
  auto f = [&](double ell) { return h0_psi(ell, psi, p) - level; };
  double a = ell0;
  while (true) {
    double b = a + dir * step;
    if (dir < 0 && b <= 0.0) b = 0.0;
    if (dir > 0 && b >= ell_max) b = ell_max;
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (auto r = bracket_root(f, lo, hi)) return r;
    if (b == 0.0 || b == ell_max) return std::nullopt;
    a = b;
  }
}

/// Libration just inside the separatrix: start next to the saddle, displaced
/// toward the island centre, and record where the orbit crosses the psi* line.
std::optional<std::pair<double, double>> separatrix_crossings(const FixedPoint& saddle,
                                                              const FixedPoint& centre,
                                                              double omega,
                                                              const DimensionlessParams& p,
                                                              const QnrOptions& opts) {
  const double psi_c = psi_of(centre, p);
  const double dl = centre.ell - saddle.ell;
  const double dp = wrap(centre.phi - saddle.phi);
  const double scale = 1e-6;
  const double norm = std::hypot(dl / std::max(centre.ell, 1.0), dp);
  Vec2 y0(saddle.ell + scale * dl / norm, saddle.phi + scale * dp / norm);
  if (!(y0[0] > classical::ell_min)) return std::nullopt;

  ode::DormandPrince54<Vec2> stepper(
      [&p](double, const Vec2& y, Vec2& dy) { dy = nr_rhs(y[0], y[1], p); },
      ode::StepperOptions{opts.tol});
  stepper.reset(0.0, y0);
  // signed angular distance from the psi* line, continuous while cos > 0
  auto side = [&](const Vec2& y) { return std::sin(y[1] + psi_offset(p) - psi_c); };
  auto near_line = [&](const Vec2& y) { return std::cos(y[1] + psi_offset(p) - psi_c) > 0.0; };
  // a saddle sitting on the psi* line is itself one of the crossings; the
  // orbit grazes the line there, so nearby sign changes are ignored
  std::vector<double> hits;
  const bool saddle_on_line = std::cos(psi_of(saddle, p) - psi_c) > 1.0 - 1e-12;
  if (saddle_on_line) hits.push_back(saddle.ell);
  const double graze = 1e-4 * std::max(1.0, saddle.ell);
  double t_prev = 0.0;
  Vec2 y_prev = y0;
  const double tau_limit = 2000.0 * 2.0 * pi / std::max(omega, 1e-12);
  bool singular = false;
  try {
    stepper.advance_to(tau_limit, [&] {
      const Vec2& y = stepper.state();
      if (y[0] < classical::ell_min) {
        singular = true;
        return false;
      }
      if (near_line(y) && near_line(y_prev) && (side(y) > 0.0) != (side(y_prev) > 0.0)) {
        auto f = [&](double t) { return side(stepper.dense(t)); };
        if (auto t = bracket_root(f, t_prev, stepper.time())) {
          const double ell = stepper.dense(*t)[0];
          if (!(saddle_on_line && std::abs(ell - saddle.ell) < graze)) hits.push_back(ell);
        }
      }
      t_prev = stepper.time();
      y_prev = y;
      return hits.size() < 2;
    });
  } catch (const ode::IntegrationError&) {
    return std::nullopt;
  }
  if (singular || hits.size() < 2) return std::nullopt;
  return std::make_pair(std::min(hits[0], hits[1]), std::max(hits[0], hits[1]));
}

}  // namespace

QnrEstimates qnr_estimates(const DimensionlessParams& p, const QnrOptions& opts) {
  p.require_positive_eta("qnr_estimates");
  if (!(p.epsilon() > 0.0)) throw std::invalid_argument("qnr_estimates requires epsilon > 0");
  QnrEstimates q;
  const auto points = fixed_points(p, opts);
  const auto centre = std::find_if(points.begin(), points.end(),
                                   [](const FixedPoint& f) { return f.kind == FixedPointKind::elliptic; });
  if (centre == points.end()) {
    q.message = "no resonance island: no elliptic point with z in [" + std::to_string(opts.z_min) +
                ", " + std::to_string(opts.z_max) + "]";
    return q;
  }
  q.elliptic = *centre;
  const double psi_c = psi_of(q.elliptic, p);
  const auto h = hessian(q.elliptic.ell, psi_c, p);
  q.omega_ph = std::sqrt(h.ll * h.pp - h.lp * h.lp);
  // centre is a maximum of H0 when h.pp < 0, a minimum otherwise; the bounding
  // separatrix is the first saddle level met moving away from the centre value
  const double sense = h.pp < 0.0 ? 1.0 : -1.0;
  const FixedPoint* saddle = nullptr;
  for (const auto& f : points) {
    if (f.kind != FixedPointKind::hyperbolic) continue;
    const double gap = sense * (q.elliptic.h0 - f.h0);
    if (gap <= 0.0) continue;
    if (!saddle || gap < sense * (q.elliptic.h0 - saddle->h0)) saddle = &f;
  }
  if (!saddle) {
    q.message = "no resonance island: no saddle bounds the elliptic point";
    return q;
  }
  q.saddle = *saddle;

  const double ell_max = z_to_ell(opts.z_max, p);
  const double step = std::max(1e-4, 1e-3 * q.elliptic.ell);
  const auto inner = level_crossing(q.elliptic.ell, psi_c, q.saddle.h0, -1, ell_max, step, p);
  const auto outer = level_crossing(q.elliptic.ell, psi_c, q.saddle.h0, +1, ell_max, step, p);
  if (!outer) {
    q.message = "no resonance island: separatrix leaves the search window";
    return q;
  }
  q.ell_inner = inner.value_or(0.0);
  q.ell_outer = *outer;
  // a saddle on the psi* line is a tangency of the level set, which the
  // bracketing walk steps over
  if (std::cos(psi_of(q.saddle, p) - psi_c) > 1.0 - 1e-12) {
    if (q.saddle.ell < q.elliptic.ell)
      q.ell_inner = std::max(q.ell_inner, q.saddle.ell);
    else
      q.ell_outer = std::min(q.ell_outer, q.saddle.ell);
  }
  q.delta_n = p.N() * (q.ell_outer - q.ell_inner);

  if (const auto hits = separatrix_crossings(q.saddle, q.elliptic, q.omega_ph, p, opts))
    q.delta_n_integrated = p.N() * (hits->second - hits->first);
  else
    q.delta_n_integrated = std::numeric_limits<double>::quiet_NaN();
  q.island = true;
  return q;
}

}  // namespace ionchaos::resonance
