/*
 * quantum.hpp - Fock-basis propagation of the driven oscillator
 *
 *   i dc_m/dtau = (m + 1/2) c_m + (epsilon / 4 eta^2) sum_n (e^{-i mu tau} F_mn + e^{i mu tau} F*_mn) c_n
 *
 * with F_mn = <m| e^{i xi} |n>, xi = eta (a + a^dagger).  Propagation runs in
 * the interaction picture a_m = c_m e^{i (m + 1/2) tau}, so the free phases
 * never limit the step size.
 */
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ionchaos/ode.hpp"
#include "ionchaos/params.hpp"

namespace ionchaos::quantum {

using cplx = std::complex<double>;

/// Which Gaussian factor the matrix element carries.  operator_definition
/// gives F_00 = exp(-eta^2 / 2); printed_kernel evaluates the same closed form
/// at sqrt(2) eta, giving exp(-eta^2).  Kept for comparison only.
enum class KernelConvention { operator_definition, printed_kernel };

/// <m| e^{i xi} |n> in closed form (generalized Laguerre, log-space prefactor).
cplx matrix_element_F(int m, int n, double eta,
                      KernelConvention convention = KernelConvention::operator_definition);

/// Interior rows/columns excluded from the truncated-unitarity check.
int unitarity_guard(int nmax, double eta);

class CouplingInvariantError : public std::runtime_error {
 public:
  CouplingInvariantError(const std::string& what, int m, int n)
      : std::runtime_error(what), m_(m), n_(n) {}
  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int m_, n_;
};

/// F restricted to the first nmax Fock states.  Immutable once built.
class CoupledMatrix {
 public:
  CoupledMatrix() = default;

  int nmax() const { return static_cast<int>(F_.rows()); }
  double eta() const { return eta_; }
  KernelConvention convention() const { return convention_; }
  const Eigen::MatrixXcd& dense() const { return F_; }
  cplx operator()(int m, int n) const { return F_(m, n); }
  /// Columns [band_lo(m), band_hi(m)] hold every entry of row m above band_threshold.
  int band_lo(int m) const { return lo_[static_cast<std::size_t>(m)]; }
  int band_hi(int m) const { return hi_[static_cast<std::size_t>(m)]; }
  /// max |F F^dagger - I| over the interior block.
  double unitarity_defect() const { return unitarity_defect_; }

  static constexpr double band_threshold = 1e-17;

 private:
  friend CoupledMatrix build_coupling(int, double, KernelConvention, double);
  Eigen::MatrixXcd F_;
  std::vector<int> lo_, hi_;
  double eta_ = 0.0;
  double unitarity_defect_ = 0.0;
  KernelConvention convention_ = KernelConvention::operator_definition;
};

/// Build F for nmax levels.  Throws CouplingInvariantError when the interior
/// unitarity defect exceeds unitarity_tol (pass a negative value to skip).
CoupledMatrix build_coupling(int nmax, double eta,
                             KernelConvention convention = KernelConvention::operator_definition,
                             double unitarity_tol = 1e-8);

struct QuantumState {
  Eigen::VectorXcd amplitudes;  // Schroedinger-picture c_n
  double eta = 0.0;
  double tau = 0.0;

  static QuantumState ground(int nmax, double eta);
  static QuantumState fock(int n, int nmax, double eta);
  int nmax() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.squaredNorm(); }
};

std::vector<double> probabilities(const QuantumState& s);
double xi_squared_expect(const QuantumState& s);
double xi_expect(const QuantumState& s);
/// <(n + 1/2)> in units of hbar_eff, i.e. sum 2 eta^2 (n + 1/2) P_n.
double h_lo_expect(const QuantumState& s);

/// Dense instantaneous generator (Schroedinger picture) at time tau.
Eigen::MatrixXcd generator_matrix(const CoupledMatrix& F, const DimensionlessParams& p, double tau);

struct PropagateOptions {
  ode::Tolerances tol{1e-11, 1e-13};
  double tail_tolerance = 1e-10;
  int guard_band = 10;
  int max_doublings = 3;
  double norm_abort = 1e-6;
  KernelConvention convention = KernelConvention::operator_definition;
};

/// Tail or norm failure that propagation could not recover from.
class PropagationError : public std::runtime_error {
 public:
  PropagationError(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

struct PropagationInfo {
  int final_nmax = 0;
  int doublings = 0;
  double max_norm_drift = 0.0;
  double max_tail_mass = 0.0;
  ode::StepStats stats;
};

/// Calls observer(state) at tau = init.tau + k dtau_out.  States emitted after
/// a basis enlargement carry the larger amplitude array.
PropagationInfo propagate(const QuantumState& init, const DimensionlessParams& p, double tau_end,
                          double dtau_out, const std::function<void(const QuantumState&)>& observer,
                          const PropagateOptions& opts = {});

std::vector<QuantumState> propagate(const QuantumState& init, const DimensionlessParams& p,
                                    double tau_end, double dtau_out,
                                    const PropagateOptions& opts = {});

}  // namespace ionchaos::quantum
