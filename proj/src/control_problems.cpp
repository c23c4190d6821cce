#include "dryctl/control_problems.hpp"

#include <cmath>
#include <numbers>

namespace dryctl {

std::string_view to_string(ControlKind kind) noexcept {
  switch (kind) {
  case ControlKind::SurroundingsTemperature:
    return "surroundings_temperature";
  case ControlKind::HeatDensityPerturbation:
    return "heat_density_perturbation";
  case ControlKind::HeatDensity:
    return "heat_density";
  case ControlKind::SquaredParametrization:
    return "squared_parametrization";
  }
  return "unknown";
}

SimpleControlProblem::SimpleControlProblem(SimpleModelParams params, const SpaceTimeGrid& grid)
    : params_(std::move(params)), grid_(grid), outlet_(static_cast<std::size_t>(grid.n_samples())),
      dir_(outlet_.size()) {
  params_.validate();
  grid_.validate_cfl(params_.u0);
}

double SimpleControlProblem::cost(std::span<const double> q) {
  simulate_outlet(params_, q, grid_, outlet_);
  return dryctl::cost(outlet_, grid_.dt(), params_.T_star);
}

double SimpleControlProblem::cost_and_gradient(std::span<const double> q, std::span<double> gradient) {
  const double J = cost(q);
  simple_direction(params_, outlet_, grid_, dir_);
  direction_to_gradient(dir_, grid_, gradient);
  return J;
}

// ---------------------------------------------------------------------------

LinearDrierControlProblem::LinearDrierControlProblem(const LinearDrierSystem& system)
    : system_(system), jacobian_(system), outlet_(system.grid()) {}

double LinearDrierControlProblem::cost(std::span<const double> dq) {
  system_.outlet_temperature(dq, outlet_.values());
  return dryctl::cost(outlet_, 0.0);
}

double LinearDrierControlProblem::cost_and_gradient(std::span<const double> dq, std::span<double> gradient) {
  const double J = cost(dq);
  const DrierAdjointResult adj = solve_adjoint_drier(jacobian_, outlet_, false);
  direction_to_gradient(adj.direction.values(), grid(), gradient);
  return J;
}

// ---------------------------------------------------------------------------

NonlinearDrierControlProblem::NonlinearDrierControlProblem(DrierParams params, DrierInlet inlet,
                                                           const SpaceTimeGrid& grid, double T_star,
                                                           std::optional<DrierState> initial,
                                                           TrajectoryStorage storage, std::string dump_path)
    : params_(std::move(params)), inlet_(std::move(inlet)), grid_(grid), T_star_(T_star),
      initial_(std::move(initial)), storage_(storage), dump_path_(std::move(dump_path)) {
  params_.validate();
  grid_.validate_cfl(params_.u0);
  if (!initial_)
    initial_ = solve_equilibrium(params_, grid_).to_state();
  if (storage_ == TrajectoryStorage::BinaryDump && dump_path_.empty())
    throw ConfigError("binary-dump trajectory storage needs a file path");
}

ForwardOptions NonlinearDrierControlProblem::forward_options(bool keep_full) const {
  ForwardOptions o;
  o.initial = initial_;
  o.keep_full = keep_full;
  return o;
}

DrierTrajectory NonlinearDrierControlProblem::simulate(std::span<const double> qdot) const {
  const ControlSignal q{TimeSeries(grid_, std::vector<double>(qdot.begin(), qdot.end())), kind()};
  return solve_forward_nonlinear(params_, q, inlet_, grid_, forward_options(true));
}

double NonlinearDrierControlProblem::cost(std::span<const double> qdot) {
  const ControlSignal q{TimeSeries(grid_, std::vector<double>(qdot.begin(), qdot.end())), kind()};
  const DrierTrajectory tr = solve_forward_nonlinear(params_, q, inlet_, grid_, forward_options(false));
  return dryctl::cost(tr.outlet_T, T_star_);
}

double NonlinearDrierControlProblem::cost_and_gradient(std::span<const double> qdot, std::span<double> gradient) {
  const ControlSignal q{TimeSeries(grid_, std::vector<double>(qdot.begin(), qdot.end())), kind()};
  TimeSeries mismatch(grid_);
  double J = 0.0;
  DrierAdjointResult adj;
  if (storage_ == TrajectoryStorage::Memory) {
    const DrierTrajectory tr = solve_forward_nonlinear(params_, q, inlet_, grid_, forward_options(true));
    for (int n = 0; n < grid_.n_samples(); ++n)
      mismatch[n] = tr.outlet_T[n] - T_star_;
    J = dryctl::cost(tr.outlet_T, T_star_);
    InMemoryTrajectory src(tr);
    TrajectoryJacobian jac(src, params_, qdot);
    adj = solve_adjoint_drier(jac, mismatch, false);
  } else {
    {
      BinaryDumpWriter writer(dump_path_, grid_);
      ForwardOptions o = forward_options(false);
      o.dump = &writer;
      const DrierTrajectory tr = solve_forward_nonlinear(params_, q, inlet_, grid_, o);
      writer.finish();
      for (int n = 0; n < grid_.n_samples(); ++n)
        mismatch[n] = tr.outlet_T[n] - T_star_;
      J = dryctl::cost(tr.outlet_T, T_star_);
    }
    BinaryDumpReader src(dump_path_);
    TrajectoryJacobian jac(src, params_, qdot);
    adj = solve_adjoint_drier(jac, mismatch, false);
  }
  direction_to_gradient(adj.direction.values(), grid_, gradient);
  return J;
}

// ---------------------------------------------------------------------------

std::vector<double> random_smooth_direction(const SpaceTimeGrid& grid, std::mt19937_64& rng, int modes) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = grid.n_samples();
  const double tau = grid.horizon();
  std::vector<double> a(static_cast<std::size_t>(modes + 1)), b(a.size());
  for (auto& v : a)
    v = normal(rng);
  for (auto& v : b)
    v = normal(rng);
  std::vector<double> d(static_cast<std::size_t>(m));
  for (int n = 0; n < m; ++n) {
    const double s = grid.t(n) / tau;
    double v = a[0];
    for (int j = 1; j <= modes; ++j)
      v += (a[static_cast<std::size_t>(j)] * std::cos(2.0 * std::numbers::pi * j * s) +
            b[static_cast<std::size_t>(j)] * std::sin(2.0 * std::numbers::pi * j * s)) /
           j;
    d[static_cast<std::size_t>(n)] = v;
  }
  const double nrm = l2_norm(d, grid.dt()) / std::sqrt(tau);
  for (auto& v : d)
    v /= nrm;
  return d;
}

DirectionalCheck directional_derivative_check(ControlProblem& problem, std::span<const double> q,
                                              std::span<const double> dq, double eps) {
  const auto& g = problem.grid();
  const auto m = static_cast<std::size_t>(g.n_samples());
  std::vector<double> grad(m), qp(q.begin(), q.end()), qm(q.begin(), q.end());
  problem.cost_and_gradient(q, grad);
  const auto w = trapezoid_weights(static_cast<int>(m), g.dt());
  DirectionalCheck c;
  c.adjoint = weighted_dot(w, grad, dq);
  for (std::size_t n = 0; n < m; ++n) {
    qp[n] += eps * dq[n];
    qm[n] -= eps * dq[n];
  }
  const double Jp = problem.cost(qp);
  const double Jm = problem.cost(qm);
  c.finite_difference = (Jp - Jm) / (2.0 * eps);
  const double scale = std::max(std::abs(c.adjoint), std::abs(c.finite_difference));
  c.relative_error = scale > 0.0 ? std::abs(c.adjoint - c.finite_difference) / scale : 0.0;
  return c;
}

} // namespace dryctl
