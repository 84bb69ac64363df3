// Epsilon sweeps of the classical chaos indicators.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionchaos/lyapunov.hpp"
#include "ionchaos/spectral.hpp"

namespace ionchaos::scan {

struct ScanScenario {
  int N = 4;
  double delta = 0.01;
  double eta = 0.45;
  classical::ClassicalState init;
  double tau_lyapunov = 2000.0;
  double tau_spectrum = 100.0;
  double dtau_spectrum = 0.1;
  spectral::Window window = spectral::Window::hann;
  classical::LyapunovOptions lyapunov;
};

struct ScanRow {
  double epsilon = 0.0;
  double lyapunov = 0.0;          // NaN when it could not be computed
  double spectral_entropy = 0.0;  // NaN when it could not be computed
  std::string error;              // empty on success
};

/// One row per epsilon, in input order, identical for any worker count.
/// Throws std::invalid_argument for an empty or unsorted grid.
std::vector<ScanRow> chaos_scan(const std::vector<double>& epsilons, const ScanScenario& scenario,
                                int workers = 1);

/// lo, lo + step, ... up to hi inclusive (within 1e-9 of a step).
std::vector<double> epsilon_range(double lo, double hi, double step);

struct CrossoverThresholds {
  double regular_below = 0.01;
  double chaotic_above = 0.05;
};

/// Midpoint between the first chaotic grid point and the regular point just
/// before it; nullopt when the scan never turns chaotic or has no regular
/// point in front of the first chaotic one.
std::optional<double> indicator_crossover(const std::vector<ScanRow>& rows,
                                          const CrossoverThresholds& th = {});

}  // namespace ionchaos::scan
