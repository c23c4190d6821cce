#pragma once

#include "dryctl/grid.hpp"

#include <string_view>

namespace dryctl {

enum class ControlKind {
  SurroundingsTemperature, ///< q(t) of the one-equation model
  HeatDensityPerturbation, ///< delta qdot(t) of the linearized drier
  HeatDensity,             ///< qdot(t) of the nonlinear drier
  SquaredParametrization,  ///< theta(t) with control (1/2) theta^2
};

std::string_view to_string(ControlKind kind) noexcept;

/// The optimization unknown: one value per time sample.
struct ControlSignal {
  TimeSeries values;
  ControlKind kind = ControlKind::SurroundingsTemperature;

  const SpaceTimeGrid& grid() const noexcept { return values.grid(); }
  double operator[](int n) const { return values[n]; }

  static ControlSignal constant(const SpaceTimeGrid& grid, double value, ControlKind kind) {
    return {TimeSeries(grid, value), kind};
  }
};

} // namespace dryctl
