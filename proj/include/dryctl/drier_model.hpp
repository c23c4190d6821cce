#pragma once

// Three-equation disk-drier model (falling-rate drying closure):
//
//   eps_s_t + u0 eps_s_x = 0
//   eps_l_t + u0 eps_l_x = -mdot,            mdot = k_f (eps_l - X* eps_s)
//   T_t     + u0 T_x     = H,                H = (qdot - mdot [h_l - c_pl (T - T_ref)]) / (c_ps eps_s + c_pl eps_l)
//
// All quantities are in one coherent unit system chosen by the caller (SI
// with either seconds or minutes as the time unit; see units.hpp). The liquid
// density is called eps_l throughout; eps_w is the same quantity.

#include "dryctl/control.hpp"
#include "dryctl/grid.hpp"
#include "dryctl/signals.hpp"

#include <optional>
#include <vector>

namespace dryctl {

class BinaryDumpWriter;

struct NodeState {
  double eps_s = 0.0;
  double eps_l = 0.0;
  double T = 0.0;
};

struct DrierParams {
  double u0 = 0.0;
  double length = 0.0;
  double k_f = 0.0;
  double X_star = 0.0;
  double c_ps = 0.0;
  double c_pl = 0.0;
  double h_l = 0.0;
  double T_ref = 0.0;
  double power = 0.0;
  double area = 0.0;
  double eps_s0 = 0.0;
  double eps_l0 = 0.0;
  double T0 = 0.0;
  double k_cond = 0.0;
  /// Clamp mdot at zero (no re-humidification). Off by default; the clamp
  /// makes the Jacobian discontinuous.
  bool clamp_condensation = false;

  /// Inlet densities from a mass flow and a liquid mass fraction:
  /// flux = mass_flow / area, rho = flux / u0, eps_i = x_i rho.
  void set_inlet_from_mass_flow(double mass_flow, double x_w);

  /// Throws ConfigError on non-positive physical parameters or X_star < 0.
  void validate() const;

  double residence_time() const noexcept { return length / u0; }
  NodeState inlet() const noexcept { return {eps_s0, eps_l0, T0}; }
};

double heat_capacity(const NodeState& s, const DrierParams& p) noexcept;

/// mdot = k_f (eps_l - X* eps_s); negative values (condensation) are kept
/// unless clamp_condensation is set.
double drying_rate(const NodeState& s, const DrierParams& p) noexcept;

/// qdot = P / (A l).
double heat_source_density(const DrierParams& p);

/// Temperature source H. Throws SingularState when the heat capacity vanishes.
double energy_rhs(const NodeState& s, double qdot, const DrierParams& p);

double peclet_number(const DrierParams& p);

/// Moisture content on a dry-solid basis.
inline double moisture_content(const NodeState& s) noexcept { return s.eps_l / s.eps_s; }

// ---------------------------------------------------------------------------

struct DrierState {
  ScalarField eps_s;
  ScalarField eps_l;
  ScalarField T;

  NodeState node(int i) const { return {eps_s[i], eps_l[i], T[i]}; }
};

enum class EquilibriumMethod {
  /// Closed-form liquid profile, temperature by a classical RK4 march in x.
  ClosedForm,
  /// Exact steady state of the discrete upwind scheme on the given grid.
  SchemeConsistent,
};

struct EquilibriumProfile {
  double eps_s = 0.0;
  ScalarField eps_l;
  ScalarField T;
  EquilibriumMethod method = EquilibriumMethod::ClosedForm;

  DrierState to_state() const;
  NodeState node(int i) const { return {eps_s, eps_l[i], T[i]}; }
  double outlet_moisture() const { return eps_l[eps_l.size() - 1] / eps_s; }
};

/// eps_l(x) = eps_l0 e^{-k_f x/u0} + eps_s0 X* (1 - e^{-k_f x/u0}).
double equilibrium_liquid(const DrierParams& p, double x);

/// Steady state for the constant inlet (eps_s0, eps_l0, T0) and constant
/// qdot = P/(A l) (or `qdot` when given).
EquilibriumProfile solve_equilibrium(const DrierParams& p, const SpaceTimeGrid& grid,
                                     EquilibriumMethod method = EquilibriumMethod::ClosedForm,
                                     std::optional<double> qdot = std::nullopt);

// ---------------------------------------------------------------------------

struct DrierInlet {
  Signal eps_s;
  Signal eps_l;
  Signal T;

  static DrierInlet constant(const NodeState& s) {
    return {Waveform::constant(s.eps_s), Waveform::constant(s.eps_l), Waveform::constant(s.T)};
  }
  NodeState at(double t) const { return {eps_s.value(t), eps_l.value(t), T.value(t)}; }
};

/// Space-time history of the nonlinear model. Fields are row-major
/// [n * n_nodes + i]; they are empty when only outlet data was kept.
class DrierTrajectory {
public:
  SpaceTimeGrid grid;
  std::vector<double> eps_s;
  std::vector<double> eps_l;
  std::vector<double> T;
  TimeSeries outlet_T;
  TimeSeries outlet_X;
  DrierState final_state;

  bool has_full() const noexcept { return !T.empty(); }
  NodeState node(int n, int i) const;
  DrierState slice(int n) const;

  /// Copies slice n into the three spans (each n_nodes long).
  void read_slice(int n, std::span<double> es, std::span<double> el, std::span<double> temp) const;
};

struct ForwardOptions {
  /// Initial state; the closed-form equilibrium is used when empty.
  std::optional<DrierState> initial;
  bool keep_full = true;
  /// Streams every time slice to a binary dump when set.
  BinaryDumpWriter* dump = nullptr;
};

/// Explicit upwind march of the three coupled equations. Throws ConfigError
/// on CFL violation and DivergenceError on non-finite state or eps_s <= 0.
DrierTrajectory solve_forward_nonlinear(const DrierParams& p, const ControlSignal& qdot, const DrierInlet& inlet,
                                        const SpaceTimeGrid& grid, const ForwardOptions& options = {});

} // namespace dryctl
