#pragma once

// Tracking cost, discrete adjoints and gradients.
//
// The adjoints are the exact transposes of the explicit forward schemes, so
// the gradients they produce are the derivatives of the discrete cost. The
// multipliers are exposed in continuous scaling: psi(x_i, t_n) is the
// multiplier of the update that produces slice n+1, divided by the trapezoid
// weight of node i. psi vanishes at the final sample (terminal condition) and
// at the inlet node (prescribed boundary). Away from the outlet's few-node
// boundary layer psi_T tends to -(T - T_star)/u0 as the grid is refined.

#include "dryctl/linear_stability.hpp"
#include "dryctl/simple_model.hpp"
#include "dryctl/trajectory_io.hpp"

#include <memory>
#include <span>
#include <vector>

namespace dryctl {

/// (1/2) int_0^tau (outlet - T_star)^2 dt by the trapezoid rule.
double cost(const TimeSeries& outlet, double T_star);
double cost(std::span<const double> outlet, double dt, double T_star);

/// Multiplier fields, row-major [n * n_nodes + i]. psi_s and psi_l are empty
/// for the one-equation model.
struct AdjointTrajectory {
  SpaceTimeGrid grid;
  std::vector<double> psi_s;
  std::vector<double> psi_l;
  std::vector<double> psi_T;

  bool has_densities() const noexcept { return !psi_s.empty(); }
  ScalarField temperature_slice(int n) const;
  double psi_T_at(int n, int i) const { return psi_T[static_cast<std::size_t>(n) * grid.n_nodes() + i]; }
};

/// Converts the search direction d(t) = int eta psi dx into the L2(0, tau)
/// gradient of the discrete cost: G_n = -(dt / w_n) d_n with trapezoid
/// weights w_n.
void direction_to_gradient(std::span<const double> direction, const SpaceTimeGrid& grid, std::span<double> gradient);
TimeSeries direction_to_gradient(const TimeSeries& direction);

// ---- one-equation model ---------------------------------------------------

/// Backward sweep for the one-equation model given the forward outlet series.
AdjointTrajectory solve_adjoint_simple(const SimpleModelParams& params, const TimeSeries& outlet,
                                       const SpaceTimeGrid& grid);

/// d(t) = int_0^l k psi(x, t) dx.
TimeSeries gradient_simple(const AdjointTrajectory& adjoint, const SimpleModelParams& params);

/// Same direction as solve_adjoint_simple + gradient_simple without storing psi.
void simple_direction(const SimpleModelParams& params, std::span<const double> outlet, const SpaceTimeGrid& grid,
                      std::span<double> direction);

// ---- drier ----------------------------------------------------------------

/// Jacobian and heat-input gain per node for each forward time slice.
class JacobianProvider {
public:
  virtual ~JacobianProvider() = default;
  virtual const SpaceTimeGrid& grid() const = 0;
  virtual double velocity() const = 0;
  /// Fills jac[i] and gain[i] for slice n; slices are requested in
  /// decreasing order during a sweep.
  virtual void slice(int n, std::span<Mat3> jac, std::span<double> gain) = 0;
  /// True if slice() returns the same data for every n.
  virtual bool frozen() const { return false; }
};

/// Jacobian frozen on an equilibrium profile (linear control).
class FrozenJacobian final : public JacobianProvider {
public:
  explicit FrozenJacobian(const LinearDrierSystem& system);
  FrozenJacobian(const EquilibriumProfile& eq, const DrierParams& p, const SpaceTimeGrid& grid);

  const SpaceTimeGrid& grid() const override { return grid_; }
  double velocity() const override { return u0_; }
  void slice(int n, std::span<Mat3> jac, std::span<double> gain) override;
  bool frozen() const override { return true; }

private:
  SpaceTimeGrid grid_;
  double u0_ = 0.0;
  std::vector<Mat3> jac_;
  std::vector<double> gain_;
};

/// Jacobian assembled on the fly from a stored nonlinear trajectory; the
/// control enters through H, so it is needed as well.
class TrajectoryJacobian final : public JacobianProvider {
public:
  TrajectoryJacobian(TrajectorySource& source, const DrierParams& p, std::span<const double> qdot);

  const SpaceTimeGrid& grid() const override { return source_.grid(); }
  double velocity() const override { return p_.u0; }
  void slice(int n, std::span<Mat3> jac, std::span<double> gain) override;

private:
  TrajectorySource& source_;
  DrierParams p_;
  std::vector<double> q_;
  std::vector<double> es_, el_, te_;
};

/// Backward sweep of the three-component adjoint driven by the outlet
/// temperature mismatch. With keep_full the psi fields are stored; the
/// search direction d(t) = int psi_T gain dx is always returned.
struct DrierAdjointResult {
  AdjointTrajectory adjoint;
  TimeSeries direction;
};

DrierAdjointResult solve_adjoint_drier(JacobianProvider& jacobian, const TimeSeries& mismatch, bool keep_full = true);

/// Direction from a stored adjoint and a fixed gain profile (linear case).
TimeSeries gradient_drier(const AdjointTrajectory& adjoint, const ScalarField& gain);

/// Direction from a stored adjoint and the gain recomputed from each stored
/// forward slice (nonlinear case).
TimeSeries gradient_drier(const AdjointTrajectory& adjoint, TrajectorySource& forward, const DrierParams& p);

} // namespace dryctl
