#pragma once

// Reference parameter sets.

#include "dryctl/drier_model.hpp"
#include "dryctl/simple_model.hpp"
#include "dryctl/units.hpp"

namespace dryctl {

/// One-equation validation case, time in minutes: length 5 m, u0 1 m/min,
/// k 0.5 1/min, set point 100 C, inlet 100 + 10 sin(2 pi t).
SimpleModelParams reference_simple_params();

/// Grid of the one-equation validation case: 200 cells, dt = 1e-3 min.
SpaceTimeGrid reference_simple_grid(double horizon);

/// Disk-drier reference case in the chosen time unit (inlet densities derived
/// from a 10 kg/min feed with liquid fraction 0.15; k_cond = 0.6 W/(m K)).
DrierParams reference_drier_params(TimeUnit time = TimeUnit::Second);

} // namespace dryctl
