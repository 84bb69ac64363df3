#include "ionchaos/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ionchaos::quantum {

namespace {

constexpr double rescale_at = 1e150;
const double log_rescale = std::log(rescale_at);

double effective_eta(double eta, KernelConvention c) {
  return c == KernelConvention::printed_kernel ? std::numbers::sqrt2 * eta : eta;
}

cplx i_pow(int d) {
  switch (d & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Walks F_{k+d,k} for k = 0, 1, ... along one diagonal using the normalized
/// Laguerre recurrence  g_k = sqrt(d! k!/(k+d)!) L_k^(d)(x),
///   sqrt((k+1)(k+1+d)) g_{k+1} = (2k+1+d-x) g_k - sqrt(k(k+d)) g_{k-1}.
class Diagonal {
 public:
  Diagonal(int d, double eta) : d_(d), x_(eta * eta), phase_(i_pow(d)) {
    if (eta == 0.0)
      log_pref_ = d == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    else
      log_pref_ = d * std::log(eta) - 0.5 * std::lgamma(d + 1.0) - 0.5 * x_;
  }

  cplx value() const {
    if (std::isinf(log_pref_)) return {0.0, 0.0};
    return phase_ * (std::exp(log_pref_ + log_scale_) * g_);
  }

  void advance() {
    const double k = k_;
    const double next =
        ((2.0 * k + 1.0 + d_ - x_) * g_ - std::sqrt(k * (k + d_)) * g_prev_) /
        std::sqrt((k + 1.0) * (k + 1.0 + d_));
    g_prev_ = g_;
    g_ = next;
    ++k_;
    if (std::abs(g_) > rescale_at) {
      g_ /= rescale_at;
      g_prev_ /= rescale_at;
      log_scale_ += log_rescale;
    }
  }

 private:
  int d_;
  double x_;
  cplx phase_;
  double log_pref_ = 0.0, log_scale_ = 0.0;
  double g_ = 1.0, g_prev_ = 0.0;
  int k_ = 0;
};

double tail_mass(const Eigen::VectorXcd& a, int k) {
  const auto n = a.size();
  return a.tail(std::min<Eigen::Index>(k, n)).squaredNorm();
}

}  // namespace

cplx matrix_element_F(int m, int n, double eta, KernelConvention convention) {
  if (m < 0 || n < 0) throw std::invalid_argument("matrix_element_F: negative level index");
  if (m > 10000 || n > 10000) throw std::invalid_argument("matrix_element_F: level index above 10^4");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("matrix_element_F: eta must be >= 0");
  Diagonal diag(std::abs(m - n), effective_eta(eta, convention));
  for (int k = 0; k < std::min(m, n); ++k) diag.advance();
  return diag.value();
}

int unitarity_guard(int nmax, double eta) {
  return std::max(10, static_cast<int>(std::ceil(4.0 * eta * std::sqrt(2.0 * nmax) + 10.0)));
}

CoupledMatrix build_coupling(int nmax, double eta, KernelConvention convention, double unitarity_tol) {
  if (nmax < 2) throw std::invalid_argument("build_coupling: nmax must be >= 2");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("build_coupling: eta must be >= 0");
  CoupledMatrix c;
  c.eta_ = eta;
  c.convention_ = convention;
  c.F_.setZero(nmax, nmax);
  const double eta_eff = effective_eta(eta, convention);
  for (int d = 0; d < nmax; ++d) {
    Diagonal diag(d, eta_eff);
    for (int k = 0; k + d < nmax; ++k) {
      const cplx v = diag.value();
      c.F_(k + d, k) = v;
      c.F_(k, k + d) = v;
      diag.advance();
    }
  }

  c.lo_.assign(static_cast<std::size_t>(nmax), 0);
  c.hi_.assign(static_cast<std::size_t>(nmax), 0);
  for (int m = 0; m < nmax; ++m) {
    int lo = m, hi = m;
    for (int n = 0; n < nmax; ++n) {
      if (std::abs(c.F_(m, n)) > CoupledMatrix::band_threshold) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
    }
    c.lo_[static_cast<std::size_t>(m)] = lo;
    c.hi_[static_cast<std::size_t>(m)] = hi;
  }

  const int interior = nmax - unitarity_guard(nmax, eta_eff);
  double worst = 0.0;
  int worst_m = 0, worst_n = 0;
  for (int m = 0; m < interior; ++m) {
    for (int mp = m; mp < interior; ++mp) {
      const int lo = std::max(c.band_lo(m), c.band_lo(mp));
      const int hi = std::min(c.band_hi(m), c.band_hi(mp));
      cplx s = 0.0;
      for (int n = lo; n <= hi; ++n) s += c.F_(m, n) * std::conj(c.F_(mp, n));
      const double defect = std::abs(s - (m == mp ? 1.0 : 0.0));
      if (defect > worst) {
        worst = defect;
        worst_m = m;
        worst_n = mp;
      }
    }
  }
  c.unitarity_defect_ = worst;
  if (unitarity_tol >= 0.0 && worst > unitarity_tol)
    throw CouplingInvariantError("coupling matrix violates truncated unitarity at (" +
                                     std::to_string(worst_m) + ", " + std::to_string(worst_n) +
                                     "): defect " + std::to_string(worst),
                                 worst_m, worst_n);
  return c;
}

QuantumState QuantumState::ground(int nmax, double eta) { return fock(0, nmax, eta); }

QuantumState QuantumState::fock(int n, int nmax, double eta) {
  if (nmax < 1 || n < 0 || n >= nmax) throw std::invalid_argument("Fock level outside the basis");
  QuantumState s;
  s.amplitudes.setZero(nmax);
  s.amplitudes[n] = 1.0;
  s.eta = eta;
  return s;
}

std::vector<double> probabilities(const QuantumState& s) {
  std::vector<double> p(static_cast<std::size_t>(s.nmax()));
  for (int n = 0; n < s.nmax(); ++n) p[static_cast<std::size_t>(n)] = std::norm(s.amplitudes[n]);
  return p;
}

double xi_squared_expect(const QuantumState& s) {
  const auto& c = s.amplitudes;
  double diag = 0.0;
  cplx off = 0.0;
  for (int n = 0; n < s.nmax(); ++n) {
    diag += (2.0 * n + 1.0) * std::norm(c[n]);
    if (n + 2 < s.nmax()) off += std::conj(c[n]) * c[n + 2] * std::sqrt((n + 1.0) * (n + 2.0));
  }
  return s.eta * s.eta * (diag + 2.0 * off.real());
}

double xi_expect(const QuantumState& s) {
  const auto& c = s.amplitudes;
  cplx sum = 0.0;
  for (int n = 0; n + 1 < s.nmax(); ++n) sum += std::conj(c[n]) * c[n + 1] * std::sqrt(n + 1.0);
  return 2.0 * s.eta * sum.real();
}

double h_lo_expect(const QuantumState& s) {
  double sum = 0.0;
  for (int n = 0; n < s.nmax(); ++n) sum += (n + 0.5) * std::norm(s.amplitudes[n]);
  return 2.0 * s.eta * s.eta * sum;
}

Eigen::MatrixXcd generator_matrix(const CoupledMatrix& F, const DimensionlessParams& p, double tau) {
  p.require_positive_eta("generator_matrix");
  const double g = p.epsilon() / (4.0 * p.eta() * p.eta());
  const cplx em = std::polar(1.0, -p.mu() * tau);
  Eigen::MatrixXcd H = g * (em * F.dense() + std::conj(em) * F.dense().conjugate());
  for (int m = 0; m < F.nmax(); ++m) H(m, m) += m + 0.5;
  return H;
}

namespace {

/// da/dtau in the interaction picture, using the banded structure of F.
class InteractionRhs {
 public:
  InteractionRhs(const CoupledMatrix& F, const DimensionlessParams& p)
      : F_(F), g_(p.epsilon() / (4.0 * p.eta() * p.eta())), mu_(p.mu()),
        b_(F.nmax()), phase_(F.nmax()) {}

  void operator()(double tau, const Eigen::VectorXcd& a, Eigen::VectorXcd& da) {
    const int n_levels = F_.nmax();
    da.resize(n_levels);
    if (g_ == 0.0) {
      da.setZero();
      return;
    }
    for (int n = 0; n < n_levels; ++n) {
      phase_[n] = std::polar(1.0, n * tau);
      b_[n] = std::conj(phase_[n]) * a[n];
    }
    const cplx em = std::polar(1.0, -mu_ * tau);
    const cplx ep = std::conj(em);
    const auto& F = F_.dense();
    for (int m = 0; m < n_levels; ++m) {
      cplx u = 0.0, w = 0.0;
      for (int n = F_.band_lo(m); n <= F_.band_hi(m); ++n) {
        const cplx f = F(n, m);  // symmetric; column access is contiguous
        u += f * b_[n];
        w += std::conj(f) * b_[n];
      }
      da[m] = cplx(0.0, -g_) * phase_[m] * (em * u + ep * w);
    }
  }

 private:
  const CoupledMatrix& F_;
  double g_, mu_;
  Eigen::VectorXcd b_, phase_;
};

Eigen::VectorXcd to_interaction(const Eigen::VectorXcd& c, double tau) {
  Eigen::VectorXcd a(c.size());
  for (Eigen::Index n = 0; n < c.size(); ++n) a[n] = c[n] * std::polar(1.0, (n + 0.5) * tau);
  return a;
}

QuantumState to_schroedinger(const Eigen::VectorXcd& a, double eta, double tau) {
  QuantumState s;
  s.eta = eta;
  s.tau = tau;
  s.amplitudes.resize(a.size());
  for (Eigen::Index n = 0; n < a.size(); ++n) s.amplitudes[n] = a[n] * std::polar(1.0, -(n + 0.5) * tau);
  return s;
}

Eigen::VectorXcd padded(const Eigen::VectorXcd& a, int nmax) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(nmax);
  out.head(a.size()) = a;
  return out;
}

}  // namespace

PropagationInfo propagate(const QuantumState& init, const DimensionlessParams& p, double tau_end,
                          double dtau_out, const std::function<void(const QuantumState&)>& observer,
                          const PropagateOptions& opts) {
  p.require_positive_eta("propagate");
  if (init.eta != p.eta()) throw std::invalid_argument("propagate: state eta differs from parameter eta");
  if (init.nmax() < 2) throw std::invalid_argument("propagate: basis needs at least two levels");
  if (std::abs(init.norm() - 1.0) > opts.norm_abort)
    throw std::invalid_argument("propagate: initial state is not normalized");
  if (!(tau_end > init.tau)) throw std::invalid_argument("tau_end must exceed the initial time");
  if (opts.max_doublings < 0 || opts.guard_band < 1) throw std::invalid_argument("invalid propagation options");

  const auto times = ode::uniform_grid(init.tau, tau_end, dtau_out);
  PropagationInfo info;
  const double norm0 = init.norm();

  int nmax = init.nmax();
  Eigen::VectorXcd checkpoint = to_interaction(init.amplitudes, init.tau);
  std::size_t next = 0;  // first sample not yet emitted
  while (tail_mass(checkpoint, opts.guard_band) > opts.tail_tolerance) {
    if (info.doublings == opts.max_doublings)
      throw PropagationError("initial state reaches the basis edge", init.tau);
    nmax *= 2;
    ++info.doublings;
    checkpoint = padded(checkpoint, nmax);
  }
  observer(init);
  next = 1;
  double checkpoint_tau = init.tau;

  while (next < times.size()) {
    const CoupledMatrix F = build_coupling(nmax, p.eta(), opts.convention, -1.0);
    InteractionRhs rhs(F, p);
    ode::DormandPrince54<Eigen::VectorXcd> stepper(
        [&rhs](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { rhs(t, y, dy); },
        ode::StepperOptions{opts.tol});
    stepper.reset(checkpoint_tau, checkpoint);
    bool breach = false;
    stepper.advance_to(times.back(), [&] {
      const auto& a = stepper.state();
      const double drift = std::abs(a.squaredNorm() - norm0);
      info.max_norm_drift = std::max(info.max_norm_drift, drift);
      if (drift > opts.norm_abort)
        throw PropagationError("norm drift " + std::to_string(drift) + " at tau = " +
                                   std::to_string(stepper.time()),
                               stepper.time());
      const double tail = tail_mass(a, opts.guard_band);
      if (tail > opts.tail_tolerance) {
        breach = true;
        return false;
      }
      info.max_tail_mass = std::max(info.max_tail_mass, tail);
      while (next < times.size() && times[next] <= stepper.time()) {
        const double t = times[next];
        checkpoint = t == stepper.time() ? a : stepper.dense(t);
        checkpoint_tau = t;
        observer(to_schroedinger(checkpoint, p.eta(), t));
        ++next;
      }
      return true;
    });
    const auto& st = stepper.stats();
    info.stats.accepted += st.accepted;
    info.stats.rejected += st.rejected;
    info.stats.rhs_evals += st.rhs_evals;
    if (!breach) break;
    if (info.doublings == opts.max_doublings)
      throw PropagationError("tail mass exceeds tolerance after " + std::to_string(info.doublings) +
                                 " basis doublings at tau = " + std::to_string(stepper.time()),
                             stepper.time());
    nmax *= 2;
    ++info.doublings;
    checkpoint = padded(checkpoint, nmax);
  }
  info.final_nmax = nmax;
  return info;
}

std::vector<QuantumState> propagate(const QuantumState& init, const DimensionlessParams& p,
                                    double tau_end, double dtau_out, const PropagateOptions& opts) {
  std::vector<QuantumState> out;
  propagate(init, p, tau_end, dtau_out, [&](const QuantumState& s) { out.push_back(s); }, opts);
  return out;
}

}  // namespace ionchaos::quantum
