#include "ionchaos/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ionchaos/parallel.hpp"

namespace ionchaos::scan {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void append_error(std::string& err, const std::string& what) {
  if (!err.empty()) err += "; ";
  err += what;
}

ScanRow scan_one(double epsilon, const ScanScenario& sc) {
  ScanRow row;
  row.epsilon = epsilon;
  try {
    const auto p = DimensionlessParams::from_detuning(epsilon, sc.eta, sc.N, sc.delta);
    try {
      row.lyapunov = classical::lyapunov_max(sc.init, p, sc.tau_lyapunov, sc.lyapunov).exponent;
    } catch (const std::exception& e) {
      row.lyapunov = nan;
      append_error(row.error, std::string("lyapunov: ") + e.what());
    }
    try {
      const auto traj = classical::integrate_cartesian(sc.init, p, sc.init.tau + sc.tau_spectrum,
                                                       sc.dtau_spectrum, sc.lyapunov.tol);
      spectral::TimeSeries ts;
      ts.dtau = sc.dtau_spectrum;
      ts.label = "xi";
      ts.values.reserve(traj.samples.size());
      for (const auto& s : traj.samples) ts.values.push_back(s.xi);
      row.spectral_entropy = spectral::spectral_entropy(spectral::power_spectrum(ts, sc.window));
    } catch (const std::exception& e) {
      row.spectral_entropy = nan;
      append_error(row.error, e.what());
    }
  } catch (const std::exception& e) {
    row.lyapunov = row.spectral_entropy = nan;
    append_error(row.error, e.what());
  }
  return row;
}

}  // namespace

std::vector<ScanRow> chaos_scan(const std::vector<double>& epsilons, const ScanScenario& scenario,
                                int workers) {
  if (epsilons.empty()) throw std::invalid_argument("chaos scan needs at least one epsilon");
  if (!std::is_sorted(epsilons.begin(), epsilons.end()))
    throw std::invalid_argument("chaos scan epsilons must be sorted ascending");
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  return parallel_map<ScanRow>(epsilons.size(), workers,
                               [&](std::size_t i) { return scan_one(epsilons[i], scenario); });
}

std::vector<double> epsilon_range(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("epsilon step must be > 0");
  if (!(hi > lo)) throw std::invalid_argument("epsilon range is empty");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + double(k) * step;
  return out;
}

std::optional<double> indicator_crossover(const std::vector<ScanRow>& rows,
                                          const CrossoverThresholds& th) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].lyapunov > th.chaotic_above)) continue;
    if (i == 0 || !(rows[i - 1].lyapunov < th.regular_below)) return std::nullopt;
    return 0.5 * (rows[i - 1].epsilon + rows[i].epsilon);
  }
  return std::nullopt;
}

}  // namespace ionchaos::scan
