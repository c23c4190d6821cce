#include "dryctl/simple_model.hpp"

#include "dryctl/errors.hpp"

#include <cmath>
#include <numeric>

namespace dryctl {

void SimpleModelParams::validate() const {
  if (!(u0 > 0.0))
    throw ConfigError("simple model: u0 must be positive");
  if (!(k > 0.0))
    throw ConfigError("simple model: k must be positive");
  if (!(length > 0.0))
    throw ConfigError("simple model: length must be positive");
}

bool SimpleModelParams::continuous_at_origin(double tol) const {
  return std::abs(T_init.value(0.0) - T_inlet.value(0.0)) <= tol;
}

namespace {

void check_inputs(const SimpleModelParams& params, std::span<const double> q, const SpaceTimeGrid& grid) {
  params.validate();
  if (static_cast<int>(q.size()) != grid.n_samples())
    throw ConfigError("control is not sampled on the solver time grid");
  if (!(params.u0 * grid.dt() < grid.dx())) {
    SpaceTimeGrid g = grid;
    g.validate_cfl(params.u0); // throws with the detailed message
  }
  if (std::abs(grid.length() - params.length) > 1e-12 * params.length)
    throw ConfigError("grid length does not match the model length");
}

// One explicit step of the one-equation model from `cur` into `next`.
inline void step(const double* cur, double* next, int n_nodes, double c, double kdt, double kdt_q,
                 double inlet) {
  next[0] = inlet;
  next[1] = cur[1] - c * (cur[1] - cur[0]) - kdt * cur[1] + kdt_q;
  const double hc = 0.5 * c;
  for (int i = 2; i < n_nodes; ++i)
    next[i] = cur[i] - hc * (3.0 * cur[i] - 4.0 * cur[i - 1] + cur[i - 2]) - kdt * cur[i] + kdt_q;
}

} // namespace

void simulate_outlet(const SimpleModelParams& params, std::span<const double> q, const SpaceTimeGrid& grid,
                     std::span<double> outlet) {
  check_inputs(params, q, grid);
  const int nn = grid.n_nodes();
  const double dt = grid.dt();
  const double c = params.u0 * dt / grid.dx();
  const double kdt = params.k * dt;

  std::vector<double> a(static_cast<std::size_t>(nn));
  std::vector<double> b(a.size());
  for (int i = 0; i < nn; ++i)
    a[i] = params.T_init.value(grid.x(i));
  a[0] = params.T_inlet.value(0.0);
  outlet[0] = a[nn - 1];

  for (int n = 0; n < grid.n_steps(); ++n) {
    step(a.data(), b.data(), nn, c, kdt, kdt * q[n], params.T_inlet.value(grid.t(n + 1)));
    if (!std::isfinite(b[nn - 1]) || !std::isfinite(b[nn / 2]))
      throw DivergenceError("simple model produced non-finite temperature", n + 1);
    outlet[n + 1] = b[nn - 1];
    std::swap(a, b);
  }
  if (!std::isfinite(std::accumulate(a.begin(), a.end(), 0.0)))
    throw DivergenceError("simple model produced non-finite temperature", grid.n_steps());
}

SimpleTrajectory solve_forward(const SimpleModelParams& params, const ControlSignal& q, const SpaceTimeGrid& grid,
                               bool keep_full) {
  if (!q.grid().same_time(grid))
    throw ConfigError("control is not sampled on the solver time grid");
  check_inputs(params, q.values.values(), grid);

  const int nn = grid.n_nodes();
  const double dt = grid.dt();
  const double c = params.u0 * dt / grid.dx();
  const double kdt = params.k * dt;

  SimpleTrajectory traj;
  traj.grid = grid;
  traj.grid.validate_cfl(params.u0);
  traj.outlet = TimeSeries(grid);
  if (keep_full)
    traj.T.resize(static_cast<std::size_t>(nn) * grid.n_samples());

  std::vector<double> a(static_cast<std::size_t>(nn));
  std::vector<double> b(a.size());
  for (int i = 0; i < nn; ++i)
    a[i] = params.T_init.value(grid.x(i));
  a[0] = params.T_inlet.value(0.0);
  traj.outlet[0] = a[nn - 1];
  if (keep_full)
    std::copy(a.begin(), a.end(), traj.T.begin());

  for (int n = 0; n < grid.n_steps(); ++n) {
    step(a.data(), b.data(), nn, c, kdt, kdt * q[n], params.T_inlet.value(grid.t(n + 1)));
    if (!std::isfinite(std::accumulate(b.begin(), b.end(), 0.0)))
      throw DivergenceError("simple model produced non-finite temperature", n + 1);
    traj.outlet[n + 1] = b[nn - 1];
    if (keep_full)
      std::copy(b.begin(), b.end(), traj.T.begin() + static_cast<std::ptrdiff_t>(n + 1) * nn);
    std::swap(a, b);
  }
  traj.final_profile = ScalarField(grid, a);
  return traj;
}

// ---------------------------------------------------------------------------

AnalyticSolution::AnalyticSolution(const SimpleModelParams& params, const ControlSignal& q)
    : params_(params), q_(q.values) {
  params_.validate();
  const auto& g = q_.grid();
  const double decay = std::exp(-params_.k * g.dt());
  const double hk = 0.5 * g.dt() * params_.k;
  I_.assign(static_cast<std::size_t>(g.n_samples()), 0.0);
  for (int n = 0; n < g.n_steps(); ++n)
    I_[n + 1] = decay * I_[n] + hk * (decay * q_[n] + q_[n + 1]);
}

double AnalyticSolution::integral_term(double t) const {
  const auto& g = q_.grid();
  if (t < 0.0 || t > g.horizon() * (1.0 + 1e-12))
    throw DomainError("analytic solution evaluated outside [0, horizon]");
  const double s = t / g.dt();
  int n = static_cast<int>(std::floor(s));
  if (n >= g.n_steps())
    return I_.back();
  const double h = t - g.t(n);
  if (h <= 0.0)
    return I_[n];
  const double decay = std::exp(-params_.k * h);
  return decay * I_[n] + 0.5 * h * params_.k * (decay * q_[n] + q_.at(t));
}

double AnalyticSolution::operator()(double x, double t) const {
  const double L = params_.length;
  if (x < -1e-12 * L || x > L * (1.0 + 1e-12))
    throw DomainError("analytic solution evaluated outside [0, length]");
  if (t < 0.0)
    throw DomainError("analytic solution evaluated at negative time");
  const double u0 = params_.u0;
  const double k = params_.k;
  if (u0 * t < x)
    return params_.T_init.value(x - u0 * t) * std::exp(-k * t) + integral_term(t);
  const double s = std::max(0.0, t - x / u0);
  return (params_.T_inlet.value(s) - integral_term(s)) * std::exp(-k * x / u0) + integral_term(t);
}

double analytic_solution(const SimpleModelParams& params, const ControlSignal& q, double x, double t) {
  return AnalyticSolution(params, q)(x, t);
}

// ---------------------------------------------------------------------------

namespace {

void require_setpoint_case(const SimpleModelParams& params) {
  params.validate();
  const auto& init = params.T_init;
  if (init.amplitude != 0.0 || std::abs(init.mean - params.T_star) > 1e-12 * std::max(1.0, std::abs(params.T_star)))
    throw UnsupportedCase("closed-form control requires T_init == T_star (constant); q(0) is undetermined otherwise");
  if (!params.T_inlet.is_waveform())
    throw UnsupportedCase("closed-form control requires an analytic (sinusoidal) inlet signal");
}

} // namespace

ControlJump control_jump(const SimpleModelParams& params) {
  require_setpoint_case(params);
  const double t0 = params.residence_time();
  const double e0 = std::exp(-params.k * t0);
  ControlJump j;
  j.t0 = t0;
  j.before = params.T_star + (params.u0 / params.k) * params.T_init.derivative(0.0) * e0;
  j.after = params.T_star - params.T_inlet.value(0.0) * e0 - params.T_inlet.derivative(0.0) * e0 / params.k;
  return j;
}

AnalyticControl analytic_optimal_control(const SimpleModelParams& params, const SpaceTimeGrid& grid) {
  require_setpoint_case(params);
  const double t0 = params.residence_time();
  if (t0 < grid.dt())
    throw ConfigError("residence time shorter than one time step");

  const double k = params.k;
  const double u0 = params.u0;
  const double e0 = std::exp(-k * t0);
  TimeSeries q(grid);
  for (int n = 0; n < grid.n_samples(); ++n) {
    const double t = grid.t(n);
    // Samples exactly at t0 take the right-hand branch.
    if (t < t0 - 1e-9 * grid.dt()) {
      q[n] = params.T_star + (u0 / k) * params.T_init.derivative(params.length - u0 * t) * std::exp(-k * t);
    } else {
      const double s = std::max(0.0, t - t0);
      const double delayed = q.at(s);
      q[n] = params.T_star - e0 * (params.T_inlet.value(s) + params.T_inlet.derivative(s) / k) + e0 * delayed;
    }
  }
  return {ControlSignal{std::move(q), ControlKind::SurroundingsTemperature}, control_jump(params)};
}

ControlSignal washout_control(const SimpleModelParams& params, const SpaceTimeGrid& grid) {
  return ControlSignal::constant(grid, params.T_star, ControlKind::SurroundingsTemperature);
}

} // namespace dryctl
