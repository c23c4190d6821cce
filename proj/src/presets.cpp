#include "dryctl/presets.hpp"

#include <numbers>

namespace dryctl {

SimpleModelParams reference_simple_params() {
  SimpleModelParams p;
  p.u0 = 1.0;
  p.k = 0.5;
  p.length = 5.0;
  p.T_star = 100.0;
  p.T_init = Waveform::constant(100.0);
  p.T_inlet = Waveform::sinusoid(100.0, 10.0, 1.0);
  return p;
}

SpaceTimeGrid reference_simple_grid(double horizon) { return SpaceTimeGrid::from_horizon(5.0, 200, 1e-3, horizon); }

DrierParams reference_drier_params(TimeUnit time) {
  UnitConverter u(time);
  DrierParams p;
  p.u0 = u.convert("u0", "1/3 m/min", Dimension::Velocity);
  p.length = u.convert("length", "10 m", Dimension::Length);
  p.k_f = u.convert("k_f", "0.2 1/min", Dimension::Rate);
  p.X_star = 0.1;
  p.c_ps = u.convert("c_ps", "1980.4 J/(kg*K)", Dimension::SpecificHeat);
  p.c_pl = u.convert("c_pl", "4181.5 J/(kg*K)", Dimension::SpecificHeat);
  p.h_l = u.convert("h_l", "2.25e6 J/kg", Dimension::LatentHeat);
  p.T_ref = 0.0;
  p.power = u.convert("power", "4e4 W", Dimension::Power);
  p.area = std::numbers::pi * 0.25;
  p.T0 = 80.0;
  p.k_cond = u.convert("k_cond", "0.6 W/(m*K)", Dimension::Conductivity);
  p.set_inlet_from_mass_flow(u.convert("mass_flow", "10 kg/min", Dimension::MassFlow), 0.15);
  return p;
}

} // namespace dryctl
