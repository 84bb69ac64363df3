#include "ionchaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fftw3.h>

namespace ionchaos::spectral {

namespace {

// fftw planning is not thread-safe; execution is
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void TimeSeries::validate() const {
  if (values.size() < min_samples)
    throw std::invalid_argument("time series '" + label + "' has " + std::to_string(values.size()) +
                                " samples, need at least " + std::to_string(min_samples));
  if (!(dtau > 0.0) || !std::isfinite(dtau)) throw std::invalid_argument("time series spacing must be > 0");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("time series '" + label + "' has non-finite samples");
}

double Spectrum::total_power() const { return std::accumulate(power.begin(), power.end(), 0.0); }

std::vector<double> windowed_signal(const TimeSeries& ts, Window window) {
  ts.validate();
  const std::size_t n = ts.values.size();
  const double mean = std::accumulate(ts.values.begin(), ts.values.end(), 0.0) / double(n);
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    double w = 1.0;
    if (window == Window::hann) w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(j) / double(n - 1)));
    x[j] = w * (ts.values[j] - mean);
  }
  return x;
}

Spectrum power_spectrum(const TimeSeries& ts, Window window) {
  std::vector<double> x = windowed_signal(ts, window);
  const std::size_t n = x.size();
  const std::size_t n_out = n / 2 + 1;
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_out));
  if (!out) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  Spectrum s;
  s.dnu = 2.0 * std::numbers::pi / (double(n) * ts.dtau);
  s.frequencies.resize(n_out);
  s.power.resize(n_out);
  const double scale = ts.dtau * ts.dtau / (2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < n_out; ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    s.frequencies[k] = double(k) * s.dnu;
    s.power[k] = (unpaired ? 1.0 : 2.0) * mag2 * scale;
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return s;
}

double spectral_entropy(const Spectrum& s) {
  const double total = s.total_power();
  if (!(total > 0.0)) throw std::domain_error("spectral entropy of a zero-power spectrum");
  if (s.power.size() < 2) return 0.0;
  double h = 0.0;
  for (double p : s.power) {
    const double q = p / total;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h / std::log(double(s.power.size()));
}

double dominant_bin_fraction(const Spectrum& s, std::size_t k) {
  const double total = s.total_power();
  if (!(total > 0.0)) throw std::domain_error("dominant bin fraction of a zero-power spectrum");
  std::vector<double> p = s.power;
  k = std::min(k, p.size());
  std::partial_sort(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k), p.end(), std::greater<>());
  return std::accumulate(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k), 0.0) / total;
}

}  // namespace ionchaos::spectral
