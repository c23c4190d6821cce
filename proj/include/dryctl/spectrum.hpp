#pragma once

#include "dryctl/grid.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dryctl {

struct SpectralPeak {
  double omega = 0.0;
  double power = 0.0;
  int bin = 0;
};

struct Beat {
  double omega1 = 0.0;
  double omega2 = 0.0;
  /// 2 pi / |omega1 - omega2|, in the time unit of the signal's grid.
  double period = 0.0;
};

struct SpectrumOptions {
  /// Drop the omega = 0 bin before normalising and peak detection.
  bool exclude_dc = false;
  bool hann_window = false;
  /// Peaks must exceed this fraction of the largest bin.
  double peak_threshold = 0.05;
};

struct SpectrumResult {
  /// Angular frequencies k * 2 pi / tau, strictly increasing.
  std::vector<double> omega;
  /// Single-sided power scaled to unit maximum.
  std::vector<double> normalized_power;
  /// Single-sided power before normalisation; sums to the mean square of the
  /// (windowed) signal.
  std::vector<double> raw_power;
  std::vector<SpectralPeak> peaks;
  std::optional<Beat> beat;
  double resolution = 0.0;

  void write_csv(const std::string& path) const;
};

/// Power spectrum of the first n_steps samples of a uniformly sampled series
/// (the closing sample duplicates the period for periodic signals and is
/// left out). Needs n_steps >= 16.
SpectrumResult power_spectrum(const TimeSeries& signal, const SpectrumOptions& options = {});
SpectrumResult power_spectrum(std::span<const double> samples, double dt, const SpectrumOptions& options = {});

/// Local maxima above threshold * max that exceed both neighbours, sorted by
/// decreasing power.
std::vector<SpectralPeak> detect_peaks(const std::vector<double>& omega, const std::vector<double>& power,
                                       double threshold);

/// Beat from the two strongest detected peaks; empty with fewer than two.
std::optional<Beat> detect_beat(const SpectrumResult& spectrum);

/// Sum of squares divided by the sample count, the quantity raw_power sums to.
double mean_square(std::span<const double> samples);

} // namespace dryctl
