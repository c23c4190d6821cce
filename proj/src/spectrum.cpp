#include "dryctl/spectrum.hpp"

#include "dryctl/csv.hpp"
#include "dryctl/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

namespace dryctl {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

} // namespace

double mean_square(std::span<const double> samples) {
  double s = 0.0;
  for (double v : samples)
    s += v * v;
  return samples.empty() ? 0.0 : s / static_cast<double>(samples.size());
}

SpectrumResult power_spectrum(const TimeSeries& signal, const SpectrumOptions& options) {
  return power_spectrum(signal.values(), signal.grid().dt(), options);
}

SpectrumResult power_spectrum(std::span<const double> samples, double dt, const SpectrumOptions& options) {
  if (samples.size() < 17)
    throw ConfigError("power spectrum needs at least 16 time steps");
  if (!(dt > 0.0))
    throw ConfigError("power spectrum needs a positive, uniform sampling interval");
  const auto M = samples.size() - 1;
  std::vector<double> in(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(M));
  if (options.hann_window)
    for (std::size_t n = 0; n < M; ++n)
      in[n] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(M)));

  const std::size_t nb = M / 2 + 1;
  std::vector<std::complex<double>> out(nb);
  {
    std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
    {
      std::lock_guard lock(planner_mutex());
      plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(M), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_ESTIMATE));
    }
    if (!plan)
      throw ConfigError("FFT planning failed");
    fftw_execute(plan.get());
  }

  SpectrumResult r;
  const double tau = dt * static_cast<double>(M);
  r.resolution = 2.0 * std::numbers::pi / tau;
  const double m2 = static_cast<double>(M) * static_cast<double>(M);
  r.omega.resize(nb);
  r.raw_power.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    r.omega[k] = r.resolution * static_cast<double>(k);
    const double a = std::norm(out[k]) / m2;
    const bool unpaired = k == 0 || (M % 2 == 0 && k == nb - 1);
    r.raw_power[k] = unpaired ? a : 2.0 * a;
  }

  const std::size_t first = options.exclude_dc ? 1 : 0;
  std::vector<double> om(r.omega.begin() + static_cast<std::ptrdiff_t>(first), r.omega.end());
  std::vector<double> pw(r.raw_power.begin() + static_cast<std::ptrdiff_t>(first), r.raw_power.end());
  const double peak = *std::max_element(pw.begin(), pw.end());
  for (auto& v : pw)
    v = peak > 0.0 ? v / peak : 0.0;
  r.peaks = detect_peaks(om, pw, options.peak_threshold);
  for (auto& pk : r.peaks)
    pk.bin += static_cast<int>(first);
  r.omega = std::move(om);
  r.normalized_power = std::move(pw);
  if (options.exclude_dc)
    r.raw_power.erase(r.raw_power.begin());
  r.beat = detect_beat(r);
  return r;
}

std::vector<SpectralPeak> detect_peaks(const std::vector<double>& omega, const std::vector<double>& power,
                                       double threshold) {
  std::vector<SpectralPeak> peaks;
  if (power.empty())
    return peaks;
  const double top = *std::max_element(power.begin(), power.end());
  if (!(top > 0.0))
    return peaks;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double p = power[k];
    if (p < threshold * top)
      continue;
    const bool left = k == 0 || p > power[k - 1];
    const bool right = k + 1 == power.size() || p > power[k + 1];
    if (left && right)
      peaks.push_back({omega[k], p, static_cast<int>(k)});
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.power > b.power; });
  return peaks;
}

std::optional<Beat> detect_beat(const SpectrumResult& spectrum) {
  if (spectrum.peaks.size() < 2)
    return std::nullopt;
  const auto& a = spectrum.peaks[0];
  const auto& b = spectrum.peaks[1];
  const double d = std::abs(a.omega - b.omega);
  if (!(d > 0.0))
    return std::nullopt;
  return Beat{a.omega, b.omega, 2.0 * std::numbers::pi / d};
}

void SpectrumResult::write_csv(const std::string& path) const {
  write_columns(path, {"omega_rad_per_s", "normalized_power"}, {omega, normalized_power});
}

} // namespace dryctl
