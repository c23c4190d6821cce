#pragma once

// Tracking problems for the three models, ready for bb_descent.

#include "dryctl/descent.hpp"
#include "dryctl/optimal_control.hpp"

#include <optional>
#include <random>
#include <string>

namespace dryctl {

/// One-equation model, control q(t), target T_star at the outlet.
class SimpleControlProblem final : public ControlProblem {
public:
  SimpleControlProblem(SimpleModelParams params, const SpaceTimeGrid& grid);

  const SpaceTimeGrid& grid() const override { return grid_; }
  ControlKind kind() const override { return ControlKind::SurroundingsTemperature; }
  double cost(std::span<const double> q) override;
  double cost_and_gradient(std::span<const double> q, std::span<double> gradient) override;

  const SimpleModelParams& params() const noexcept { return params_; }

private:
  SimpleModelParams params_;
  SpaceTimeGrid grid_;
  std::vector<double> outlet_, dir_;
};

/// Linearized drier, control delta qdot(t), target zero outlet perturbation.
class LinearDrierControlProblem final : public ControlProblem {
public:
  explicit LinearDrierControlProblem(const LinearDrierSystem& system);

  const SpaceTimeGrid& grid() const override { return system_.grid(); }
  ControlKind kind() const override { return ControlKind::HeatDensityPerturbation; }
  double cost(std::span<const double> dq) override;
  double cost_and_gradient(std::span<const double> dq, std::span<double> gradient) override;

  const LinearDrierSystem& system() const noexcept { return system_; }

private:
  const LinearDrierSystem& system_;
  FrozenJacobian jacobian_;
  TimeSeries outlet_;
};

/// Where the nonlinear forward trajectory lives between the forward and the
/// backward sweep.
enum class TrajectoryStorage { Memory, BinaryDump };

/// Nonlinear drier, control qdot(t), target T_star at the outlet.
class NonlinearDrierControlProblem final : public ControlProblem {
public:
  NonlinearDrierControlProblem(DrierParams params, DrierInlet inlet, const SpaceTimeGrid& grid, double T_star,
                               std::optional<DrierState> initial = std::nullopt,
                               TrajectoryStorage storage = TrajectoryStorage::Memory, std::string dump_path = {});

  const SpaceTimeGrid& grid() const override { return grid_; }
  ControlKind kind() const override { return ControlKind::HeatDensity; }
  double cost(std::span<const double> qdot) override;
  double cost_and_gradient(std::span<const double> qdot, std::span<double> gradient) override;

  /// Forward solve with the full history kept (for reporting).
  DrierTrajectory simulate(std::span<const double> qdot) const;
  double target() const noexcept { return T_star_; }

private:
  ForwardOptions forward_options(bool keep_full) const;

  DrierParams params_;
  DrierInlet inlet_;
  SpaceTimeGrid grid_;
  double T_star_;
  std::optional<DrierState> initial_;
  TrajectoryStorage storage_;
  std::string dump_path_;
};

// ---------------------------------------------------------------------------

/// Smooth random perturbation: a few low-frequency Fourier modes with
/// normally distributed coefficients, scaled to unit L2 norm.
std::vector<double> random_smooth_direction(const SpaceTimeGrid& grid, std::mt19937_64& rng, int modes = 6);

struct DirectionalCheck {
  double adjoint = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
};

/// Compares <G(q), dq> with (J(q + eps dq) - J(q - eps dq)) / (2 eps).
/// eps is absolute; the direction is used as given.
DirectionalCheck directional_derivative_check(ControlProblem& problem, std::span<const double> q,
                                              std::span<const double> dq, double eps);

} // namespace dryctl
