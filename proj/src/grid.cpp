#include "dryctl/grid.hpp"

#include "dryctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dryctl {

SpaceTimeGrid SpaceTimeGrid::uniform(double length, int n_cells, double dt, int n_steps) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("grid length must be positive and finite");
  if (n_cells < 2)
    throw ConfigError("grid needs at least 3 nodes (n_cells >= 2)");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("time step must be positive and finite");
  if (n_steps < 1)
    throw ConfigError("grid needs at least one time step");

  SpaceTimeGrid g;
  g.length_ = length;
  g.n_cells_ = n_cells;
  g.dx_ = length / n_cells;
  g.dt_ = dt;
  g.n_steps_ = n_steps;
  g.horizon_ = dt * n_steps;
  return g;
}

SpaceTimeGrid SpaceTimeGrid::from_horizon(double length, int n_cells, double dt, double horizon) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw ConfigError("horizon and time step must be positive");
  const long steps = std::lround(horizon / dt);
  if (steps < 1)
    throw ConfigError("horizon shorter than one time step");
  if (steps > 100'000'000)
    throw ConfigError("horizon/dt exceeds 1e8 time steps");
  auto g = uniform(length, n_cells, horizon / static_cast<double>(steps), static_cast<int>(steps));
  g.horizon_ = horizon;
  return g;
}

void SpaceTimeGrid::validate_cfl(double u0) {
  if (!(u0 > 0.0) || !std::isfinite(u0))
    throw ConfigError("advection velocity must be positive");
  if (!(u0 * dt_ < dx_)) {
    std::ostringstream os;
    os.precision(6);
    os << "CFL condition violated: u0*dt = " << u0 << " * " << dt_ << " = " << u0 * dt_
       << " is not below dx = " << dx_;
    throw ConfigError(os.str());
  }
  cfl_velocity_ = u0;
  cfl_ok_ = true;
}

namespace {
bool close(double a, double b) noexcept { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }
} // namespace

bool SpaceTimeGrid::same_space(const SpaceTimeGrid& o) const noexcept {
  return n_cells_ == o.n_cells_ && close(length_, o.length_);
}

bool SpaceTimeGrid::same_time(const SpaceTimeGrid& o) const noexcept {
  return n_steps_ == o.n_steps_ && close(dt_, o.dt_);
}

bool SpaceTimeGrid::same_layout(const SpaceTimeGrid& o) const noexcept {
  return same_space(o) && same_time(o);
}

// ---------------------------------------------------------------------------

namespace {

bool finite_all(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x))
      return false;
  return true;
}

} // namespace

ScalarField::ScalarField(const SpaceTimeGrid& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.n_nodes()), fill) {}

ScalarField::ScalarField(const SpaceTimeGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.n_nodes())
    throw ConfigError("field length does not match the spatial grid");
}

bool ScalarField::all_finite() const noexcept { return finite_all(values_); }

TimeSeries::TimeSeries(const SpaceTimeGrid& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.n_samples()), fill) {}

TimeSeries::TimeSeries(const SpaceTimeGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.n_samples())
    throw ConfigError("series length does not match the time grid");
}

double TimeSeries::at(double t) const {
  const double s = t / grid_.dt();
  if (s <= 0.0)
    return values_.front();
  const int last = grid_.n_steps();
  if (s >= last)
    return values_.back();
  const int n = static_cast<int>(s);
  const double w = s - n;
  return (1.0 - w) * values_[n] + w * values_[n + 1];
}

bool TimeSeries::all_finite() const noexcept { return finite_all(values_); }

// ---------------------------------------------------------------------------

void upwind_derivative(std::span<const double> f, double dx, std::span<double> out) {
  const std::size_t n = f.size();
  const double inv = 1.0 / dx;
  const double half_inv = 0.5 * inv;
  out[0] = 0.0;
  out[1] = (f[1] - f[0]) * inv;
  for (std::size_t i = 2; i < n; ++i)
    out[i] = (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) * half_inv;
}

void upwind_derivative_transpose(std::span<const double> lam, double dx, std::span<double> out) {
  const std::size_t n = lam.size();
  const std::size_t last = n - 1;
  const double inv = 1.0 / dx;
  auto at = [&](std::size_t j) { return j <= last ? lam[j] : 0.0; };
  out[0] = 0.0;
  out[1] = (lam[1] - 2.0 * at(2) + 0.5 * at(3)) * inv;
  for (std::size_t i = 2; i < n; ++i)
    out[i] = (1.5 * lam[i] - 2.0 * at(i + 1) + 0.5 * at(i + 2)) * inv;
}

ScalarField upwind_derivative(const ScalarField& field) {
  if (field.size() < 3)
    throw ConfigError("upwind stencil needs at least 3 nodes");
  ScalarField out(field.grid());
  upwind_derivative(field.values(), field.grid().dx(), out.values());
  return out;
}

ScalarField upwind_advect(const ScalarField& field, double u0, double dt) {
  const auto& g = field.grid();
  if (field.size() < 3)
    throw ConfigError("upwind stencil needs at least 3 nodes");
  if (!(u0 * dt < g.dx())) {
    std::ostringstream os;
    os << "CFL condition violated: u0 = " << u0 << ", dt = " << dt << ", dx = " << g.dx();
    throw ConfigError(os.str());
  }
  ScalarField d = upwind_derivative(field);
  ScalarField out = field;
  for (int i = 1; i < field.size(); ++i)
    out[i] = field[i] - u0 * dt * d[i];
  return out;
}

// ---------------------------------------------------------------------------

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2)
    return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    s += f[i];
  return s * h;
}

std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(static_cast<std::size_t>(n), h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

double integrate_space(const ScalarField& field) {
  return trapezoid(field.values(), field.grid().dx());
}

double integrate_time(const TimeSeries& series) {
  return trapezoid(series.values(), series.grid().dt());
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += w[i] * a[i] * b[i];
  return s;
}

} // namespace dryctl
