#pragma once

// Barzilai-Borwein steepest descent on sampled controls, with the L2(0, tau)
// inner product realised by trapezoid weights.

#include "dryctl/control.hpp"
#include "dryctl/errors.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dryctl {

/// Differentiable cost of a sampled control.
class ControlProblem {
public:
  virtual ~ControlProblem() = default;
  virtual const SpaceTimeGrid& grid() const = 0;
  virtual ControlKind kind() const = 0;
  virtual double cost(std::span<const double> control) = 0;
  /// Returns the cost and writes its L2(0, tau) gradient.
  virtual double cost_and_gradient(std::span<const double> control, std::span<double> gradient) = 0;
};

struct DescentOptions {
  int max_iters = 1000;
  /// Stop when the gradient norm falls below tol_grad times the first one.
  double tol_grad = 1e-8;
  /// Stop when the cost falls to tol_cost or below. Negative means "use the
  /// default 1e-10 * T_star^2 * tau", which needs cost_scale.
  double tol_cost = -1.0;
  /// T_star^2 * tau, used only for the default tol_cost.
  double cost_scale = 0.0;
  /// First step: lambda0 * |q0| / |G0|.
  double lambda0 = 1e-3;
  /// Called after each recorded iteration; return false to stop.
  std::function<bool(int iter, double J)> progress;
};

struct TraceRow {
  int iter = 0;
  double J = 0.0;
  double alpha = 0.0;
  double grad_norm = 0.0;
  double wall_ms = 0.0;
};

struct DescentTrace {
  std::vector<TraceRow> rows;

  std::size_t size() const noexcept { return rows.size(); }
  /// Number of iterations whose cost exceeds the previous one.
  int increases() const;
  /// CSV with columns iter, J, alpha, grad_norm, wall_ms.
  void write_csv(const std::string& path) const;
};

enum class StopReason { GradientTolerance, CostTolerance, MaxIterations, Interrupted };

std::string_view to_string(StopReason r) noexcept;

struct DescentResult {
  ControlSignal control;
  /// Squared-parametrization runs also return the final theta.
  std::vector<double> theta;
  DescentTrace trace;
  StopReason reason = StopReason::MaxIterations;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int best_iter = 0;
  /// Iterations where the secant curvature was non-positive.
  int fallback_steps = 0;
  std::vector<std::string> warnings;
};

/// Raised when the cost becomes non-finite; carries the trace so far.
class DescentDiverged : public DivergenceError {
public:
  DescentDiverged(const std::string& what, int iter, DescentTrace trace)
      : DivergenceError(what, iter), trace_(std::move(trace)) {}
  const DescentTrace& trace() const noexcept { return trace_; }

private:
  DescentTrace trace_;
};

/// x_{k+1} = x_k - alpha_k G(x_k), alpha_k = <d, d> / <d, y> with d the last
/// step and y the gradient change. The best iterate is returned, so the final
/// cost never exceeds the initial one; the trace keeps the raw sequence.
DescentResult bb_descent(ControlProblem& problem, const ControlSignal& q0, const DescentOptions& options = {});

/// Descent on theta with control (1/2) theta^2 >= 0 and gradient theta * G.
DescentResult bb_descent_nonneg(ControlProblem& problem, std::span<const double> theta0,
                                const DescentOptions& options = {});

/// L2 norm with trapezoid weights.
double l2_norm(std::span<const double> v, double dt);

} // namespace dryctl
