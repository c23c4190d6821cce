#include "dryctl/signals.hpp"

#include "dryctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dryctl {

Waveform Waveform::sinusoid(double mean, double amplitude, double period) {
  if (!(period > 0.0))
    throw ConfigError("sinusoid period must be positive");
  return {mean, amplitude, 2.0 * std::numbers::pi / period, 0.0};
}

double Waveform::value(double s) const {
  return mean + amplitude * std::sin(omega * s + phase);
}

double Waveform::derivative(double s) const {
  return amplitude * omega * std::cos(omega * s + phase);
}

double SampledSignal::value(double t) const {
  if (times.empty())
    return 0.0;
  if (t <= times.front())
    return values.front();
  if (t >= times.back())
    return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[k - 1];
  const double t1 = times[k];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * values[k - 1] + w * values[k];
}

SampledSignal SampledSignal::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open sampled series '" + path + "'");
  SampledSignal s;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t = 0.0;
    double v = 0.0;
    if (!(ls >> t >> v)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("malformed row in sampled series '" + path + "': " + line);
    }
    first = false;
    if (!s.times.empty() && !(t > s.times.back()))
      throw ConfigError("sampled series '" + path + "' must have strictly increasing times");
    s.times.push_back(t);
    s.values.push_back(v);
  }
  if (s.times.size() < 2)
    throw ConfigError("sampled series '" + path + "' needs at least two rows");
  return s;
}

Signal::Signal(SampledSignal s) : impl_(std::move(s)) {
  const auto& ss = std::get<SampledSignal>(impl_);
  if (ss.times.size() != ss.values.size() || ss.times.empty())
    throw ConfigError("sampled signal needs matching, non-empty time and value arrays");
}

double Signal::value(double t) const {
  return std::visit([t](const auto& s) { return s.value(t); }, impl_);
}

double Signal::derivative(double t) const {
  if (const auto* w = std::get_if<Waveform>(&impl_))
    return w->derivative(t);
  throw UnsupportedCase("analytic derivative requested for a sampled signal");
}

const Waveform& Signal::waveform() const {
  if (const auto* w = std::get_if<Waveform>(&impl_))
    return *w;
  throw UnsupportedCase("signal is sampled, not a waveform");
}

const SampledSignal& Signal::sampled() const {
  if (const auto* s = std::get_if<SampledSignal>(&impl_))
    return *s;
  throw UnsupportedCase("signal is a waveform, not sampled");
}

} // namespace dryctl
