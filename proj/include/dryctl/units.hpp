#pragma once

// Quantity strings ("0.5 1/min", "4e4 W", "1/3 m/min") and their conversion
// to a coherent SI system whose time unit is either the second or the minute.

#include <string>
#include <string_view>
#include <vector>

namespace dryctl {

enum class TimeUnit { Second, Minute };

TimeUnit parse_time_unit(std::string_view text);
std::string_view to_string(TimeUnit u) noexcept;
double seconds_per(TimeUnit u) noexcept;

enum class Dimension {
  Dimensionless,
  Length,
  Area,
  Time,
  Velocity,
  Rate,            ///< 1/time
  AngularFrequency, ///< rad/time
  Temperature,     ///< degrees Celsius, also used for differences
  Power,
  MassFlow,
  Density,         ///< kg/m^3
  SpecificHeat,    ///< J/(kg K)
  LatentHeat,      ///< J/kg
  Conductivity,    ///< W/(m K)
  HeatDensity,     ///< W/m^3
};

std::string_view to_string(Dimension d) noexcept;

struct Quantity {
  double value = 0.0;
  std::string unit;
};

/// Splits "value unit"; the value may be a decimal or a fraction a/b.
Quantity split_quantity(std::string_view text);

/// One recorded conversion, for the run log.
struct Conversion {
  std::string field;
  std::string input;
  double value = 0.0;
  std::string target_unit;
};

/// Converts quantity strings into the chosen unit system and records each
/// conversion. Throws ConfigError on unknown units or dimension mismatches.
class UnitConverter {
public:
  explicit UnitConverter(TimeUnit time) : time_(time) {}

  TimeUnit time_unit() const noexcept { return time_; }
  double convert(std::string_view field, std::string_view text, Dimension dim);
  /// Name of the unit a converted value of this dimension is expressed in.
  std::string target_unit(Dimension dim) const;
  const std::vector<Conversion>& log() const noexcept { return log_; }

private:
  TimeUnit time_;
  std::vector<Conversion> log_;
};

} // namespace dryctl
