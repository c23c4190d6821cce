#pragma once

// One-equation heating model
//
//   T_t + u0 T_x = k (q(t) - T),   T(0,t) = T_inlet(t),   T(x,0) = T_init(x)
//
// with its explicit upwind solver, the closed-form solution, the closed-form
// set-point control and the washout (large k*l/u0) control.

#include "dryctl/control.hpp"
#include "dryctl/grid.hpp"
#include "dryctl/signals.hpp"

#include <vector>

namespace dryctl {

struct SimpleModelParams {
  double u0 = 1.0;       // [length/time]
  double k = 0.5;        // [1/time]
  double length = 5.0;   // [length]
  double T_star = 100.0; // set point
  Waveform T_init = Waveform::constant(100.0); // function of x
  Signal T_inlet = Waveform::constant(100.0);  // function of t

  /// Throws ConfigError unless u0, k, length > 0.
  void validate() const;

  /// T_init(0) == T_inlet(0) within tol.
  bool continuous_at_origin(double tol = 1e-12) const;

  double residence_time() const noexcept { return length / u0; }
};

struct SimpleTrajectory {
  SpaceTimeGrid grid;
  /// Row-major [n * n_nodes + i]; empty when only the outlet was kept.
  std::vector<double> T;
  TimeSeries outlet;
  ScalarField final_profile;

  bool has_full() const noexcept { return !T.empty(); }
  double at(int n, int i) const { return T[static_cast<std::size_t>(n) * grid.n_nodes() + i]; }
};

/// Explicit second-order upwind march (first-order at node 1), inlet pinned
/// to T_inlet(t^{n+1}). Throws ConfigError on CFL violation and
/// DivergenceError on non-finite values.
SimpleTrajectory solve_forward(const SimpleModelParams& params, const ControlSignal& q,
                               const SpaceTimeGrid& grid, bool keep_full = true);

/// Outlet series only; the allocation-light path used inside descent loops.
void simulate_outlet(const SimpleModelParams& params, std::span<const double> q,
                     const SpaceTimeGrid& grid, std::span<double> outlet);

/// Closed-form solution with I(t) = e^{-kt} int_0^t e^{kt'} k q(t') dt'
/// integrated by the trapezoid rule on the control's time grid.
class AnalyticSolution {
public:
  AnalyticSolution(const SimpleModelParams& params, const ControlSignal& q);

  /// Throws DomainError for x outside [0, length] or t outside [0, horizon].
  double operator()(double x, double t) const;

  double integral_term(double t) const;

private:
  SimpleModelParams params_;
  TimeSeries q_;
  std::vector<double> I_;
};

double analytic_solution(const SimpleModelParams& params, const ControlSignal& q, double x, double t);

/// One-sided limits of the set-point control at t0 = length/u0. `after` is the
/// closed-form jump value in which the delayed term q(0) e^{-k t0} is taken
/// with q(0) = 0.
struct ControlJump {
  double t0 = 0.0;
  double before = 0.0;
  double after = 0.0;
};

struct AnalyticControl {
  ControlSignal control;
  ControlJump jump;
};

/// Set-point control that holds T(length, t) = T_star. Only the case
/// T_init == T_star (constant) is supported; otherwise throws UnsupportedCase.
/// Samples at t >= t0 follow the delay recursion with q(t - t0) interpolated
/// linearly between previously computed samples.
AnalyticControl analytic_optimal_control(const SimpleModelParams& params, const SpaceTimeGrid& grid);

ControlJump control_jump(const SimpleModelParams& params);

/// Constant q = T_star, adequate when k*length/u0 >> 1.
ControlSignal washout_control(const SimpleModelParams& params, const SpaceTimeGrid& grid);

} // namespace dryctl
