#include "dryctl/units.hpp"

#include "dryctl/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace dryctl {

TimeUnit parse_time_unit(std::string_view text) {
  if (text == "s" || text == "second" || text == "seconds")
    return TimeUnit::Second;
  if (text == "min" || text == "minute" || text == "minutes")
    return TimeUnit::Minute;
  throw ConfigError("unknown time unit '" + std::string(text) + "' (expected s or min)");
}

std::string_view to_string(TimeUnit u) noexcept { return u == TimeUnit::Second ? "s" : "min"; }

double seconds_per(TimeUnit u) noexcept { return u == TimeUnit::Second ? 1.0 : 60.0; }

std::string_view to_string(Dimension d) noexcept {
  switch (d) {
  case Dimension::Dimensionless: return "dimensionless";
  case Dimension::Length: return "length";
  case Dimension::Area: return "area";
  case Dimension::Time: return "time";
  case Dimension::Velocity: return "velocity";
  case Dimension::Rate: return "rate";
  case Dimension::AngularFrequency: return "angular frequency";
  case Dimension::Temperature: return "temperature";
  case Dimension::Power: return "power";
  case Dimension::MassFlow: return "mass flow";
  case Dimension::Density: return "density";
  case Dimension::SpecificHeat: return "specific heat";
  case Dimension::LatentHeat: return "latent heat";
  case Dimension::Conductivity: return "conductivity";
  case Dimension::HeatDensity: return "heat density";
  }
  return "unknown";
}

namespace {

struct UnitDef {
  std::string_view name;
  Dimension dim;
  double to_si;  // SI value of one unit (seconds as time unit)
};

// Temperatures are Celsius throughout; kelvin is accepted for differences
// only through the specific-heat and conductivity units.
constexpr std::array kUnits{
    UnitDef{"", Dimension::Dimensionless, 1.0},
    UnitDef{"1", Dimension::Dimensionless, 1.0},
    UnitDef{"m", Dimension::Length, 1.0},
    UnitDef{"cm", Dimension::Length, 1e-2},
    UnitDef{"mm", Dimension::Length, 1e-3},
    UnitDef{"km", Dimension::Length, 1e3},
    UnitDef{"m^2", Dimension::Area, 1.0},
    UnitDef{"m2", Dimension::Area, 1.0},
    UnitDef{"s", Dimension::Time, 1.0},
    UnitDef{"min", Dimension::Time, 60.0},
    UnitDef{"h", Dimension::Time, 3600.0},
    UnitDef{"hr", Dimension::Time, 3600.0},
    UnitDef{"m/s", Dimension::Velocity, 1.0},
    UnitDef{"m/min", Dimension::Velocity, 1.0 / 60.0},
    UnitDef{"m/h", Dimension::Velocity, 1.0 / 3600.0},
    UnitDef{"1/s", Dimension::Rate, 1.0},
    UnitDef{"1/min", Dimension::Rate, 1.0 / 60.0},
    UnitDef{"1/h", Dimension::Rate, 1.0 / 3600.0},
    UnitDef{"rad/s", Dimension::AngularFrequency, 1.0},
    UnitDef{"rad/min", Dimension::AngularFrequency, 1.0 / 60.0},
    UnitDef{"C", Dimension::Temperature, 1.0},
    UnitDef{"degC", Dimension::Temperature, 1.0},
    UnitDef{"W", Dimension::Power, 1.0},
    UnitDef{"kW", Dimension::Power, 1e3},
    UnitDef{"J/s", Dimension::Power, 1.0},
    UnitDef{"J/min", Dimension::Power, 1.0 / 60.0},
    UnitDef{"kg/s", Dimension::MassFlow, 1.0},
    UnitDef{"kg/min", Dimension::MassFlow, 1.0 / 60.0},
    UnitDef{"kg/h", Dimension::MassFlow, 1.0 / 3600.0},
    UnitDef{"kg/m^3", Dimension::Density, 1.0},
    UnitDef{"kg/m3", Dimension::Density, 1.0},
    UnitDef{"J/(kg*K)", Dimension::SpecificHeat, 1.0},
    UnitDef{"J/(kg K)", Dimension::SpecificHeat, 1.0},
    UnitDef{"J/kg/K", Dimension::SpecificHeat, 1.0},
    UnitDef{"kJ/(kg*K)", Dimension::SpecificHeat, 1e3},
    UnitDef{"J/kg", Dimension::LatentHeat, 1.0},
    UnitDef{"kJ/kg", Dimension::LatentHeat, 1e3},
    UnitDef{"MJ/kg", Dimension::LatentHeat, 1e6},
    UnitDef{"W/(m*K)", Dimension::Conductivity, 1.0},
    UnitDef{"W/(m K)", Dimension::Conductivity, 1.0},
    UnitDef{"W/m/K", Dimension::Conductivity, 1.0},
    UnitDef{"J/(s*m*K)", Dimension::Conductivity, 1.0},
    UnitDef{"J/(min*m*K)", Dimension::Conductivity, 1.0 / 60.0},
    UnitDef{"W/m^3", Dimension::HeatDensity, 1.0},
    UnitDef{"W/m3", Dimension::HeatDensity, 1.0},
    UnitDef{"J/(s*m^3)", Dimension::HeatDensity, 1.0},
    UnitDef{"J/(min*m^3)", Dimension::HeatDensity, 1.0 / 60.0},
};

// Exponent of time in each dimension, used to move from seconds to the
// chosen time unit.
int time_exponent(Dimension d) {
  switch (d) {
  case Dimension::Time: return 1;
  case Dimension::Velocity:
  case Dimension::Rate:
  case Dimension::AngularFrequency:
  case Dimension::Power:
  case Dimension::MassFlow:
  case Dimension::Conductivity:
  case Dimension::HeatDensity: return -1;
  default: return 0;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end;
}

} // namespace

Quantity split_quantity(std::string_view text) {
  const std::string_view s = trim(text);
  std::size_t cut = 0;
  while (cut < s.size() && !std::isspace(static_cast<unsigned char>(s[cut])))
    ++cut;
  const std::string_view num = s.substr(0, cut);
  const std::string_view unit = trim(s.substr(cut));

  double v = 0.0;
  const auto slash = num.find('/');
  bool ok;
  if (slash == std::string_view::npos) {
    ok = parse_number(num, v);
  } else {
    double a = 0.0, b = 0.0;
    ok = parse_number(num.substr(0, slash), a) && parse_number(num.substr(slash + 1), b) && b != 0.0;
    v = ok ? a / b : 0.0;
  }
  if (!ok || !std::isfinite(v))
    throw ConfigError("cannot parse quantity '" + std::string(text) + "'");
  return {v, std::string(unit)};
}

double UnitConverter::convert(std::string_view field, std::string_view text, Dimension dim) {
  const Quantity q = split_quantity(text);
  for (const auto& u : kUnits) {
    if (u.name != q.unit)
      continue;
    if (u.dim != dim)
      throw ConfigError(std::string(field) + ": unit '" + q.unit + "' is a " + std::string(to_string(u.dim)) +
                        ", expected a " + std::string(to_string(dim)));
    // Values already in the target unit pass through untouched, so echoed
    // configs reload bit for bit.
    const double v = q.unit == target_unit(dim)
                         ? q.value
                         : q.value * u.to_si * std::pow(seconds_per(time_), -time_exponent(dim));
    log_.push_back({std::string(field), std::string(text), v, target_unit(dim)});
    return v;
  }
  throw ConfigError(std::string(field) + ": unknown unit '" + q.unit + "'");
}

std::string UnitConverter::target_unit(Dimension dim) const {
  const std::string t(to_string(time_));
  switch (dim) {
  case Dimension::Dimensionless: return "1";
  case Dimension::Length: return "m";
  case Dimension::Area: return "m^2";
  case Dimension::Time: return t;
  case Dimension::Velocity: return "m/" + t;
  case Dimension::Rate: return "1/" + t;
  case Dimension::AngularFrequency: return "rad/" + t;
  case Dimension::Temperature: return "C";
  case Dimension::Power: return "J/" + t;
  case Dimension::MassFlow: return "kg/" + t;
  case Dimension::Density: return "kg/m^3";
  case Dimension::SpecificHeat: return "J/(kg*K)";
  case Dimension::LatentHeat: return "J/kg";
  case Dimension::Conductivity: return "J/(" + t + "*m*K)";
  case Dimension::HeatDensity: return "J/(" + t + "*m^3)";
  }
  return "";
}

} // namespace dryctl
