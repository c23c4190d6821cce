#pragma once

#include <string>
#include <variant>
#include <vector>

namespace dryctl {

/// mean + amplitude * sin(omega * s + phase). Used both for time signals and
/// for initial profiles in x; the derivative is analytic.
struct Waveform {
  double mean = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;

  static Waveform constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static Waveform sinusoid(double mean, double amplitude, double period);

  double value(double s) const;
  double derivative(double s) const;
};

/// Piecewise-linear samples (t_k, v_k), held constant outside the range.
struct SampledSignal {
  std::vector<double> times;
  std::vector<double> values;

  double value(double t) const;

  /// Two-column CSV (t, value); a non-numeric first line is treated as a header.
  static SampledSignal from_csv(const std::string& path);
};

/// A scalar boundary or forcing signal: analytic waveform or sampled series.
class Signal {
public:
  Signal() : impl_(Waveform{}) {}
  Signal(Waveform w) : impl_(w) {}
  Signal(SampledSignal s);

  double value(double t) const;
  /// Throws UnsupportedCase for sampled signals.
  double derivative(double t) const;

  bool is_waveform() const noexcept { return std::holds_alternative<Waveform>(impl_); }
  const Waveform& waveform() const;
  const SampledSignal& sampled() const;

private:
  std::variant<Waveform, SampledSignal> impl_;
};

} // namespace dryctl
