// Power spectra of uniformly sampled signals and scalar chaos indicators.
#pragma once

#include <string>
#include <vector>

namespace ionchaos::spectral {

struct TimeSeries {
  std::vector<double> values;
  double dtau = 0.0;
  std::string label;

  static constexpr std::size_t min_samples = 64;
  /// Throws std::invalid_argument when the series is unusable.
  void validate() const;
};

enum class Window { rectangular, hann };

/// One-sided spectrum on nu_k = 2 pi k / (n dtau), in units of the trap
/// frequency.  power is normalized so that sum(power) * dnu equals the energy
/// sum(x_w^2) dtau of the mean-removed, windowed record.
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<double> power;
  double dnu = 0.0;

  double total_power() const;
};

Spectrum power_spectrum(const TimeSeries& ts, Window window = Window::hann);

/// The mean-removed, windowed samples the spectrum is computed from.
std::vector<double> windowed_signal(const TimeSeries& ts, Window window);

/// Shannon entropy of the normalized power divided by log(bin count), in [0, 1].
double spectral_entropy(const Spectrum& s);

/// Share of the total power carried by the k strongest bins.
double dominant_bin_fraction(const Spectrum& s, std::size_t k = 5);

}  // namespace ionchaos::spectral
