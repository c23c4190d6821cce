#pragma once

#include <span>
#include <vector>

namespace dryctl {

// Uniform node-based grid on [0, length] x [0, horizon]. Nodes x_i = i*dx for
// i = 0..n_cells (node 0 is the inlet), samples t_n = n*dt for n = 0..n_steps.
class SpaceTimeGrid {
public:
  SpaceTimeGrid() = default;

  /// Throws ConfigError on non-positive sizes.
  static SpaceTimeGrid uniform(double length, int n_cells, double dt, int n_steps);

  /// n_steps = round(horizon / dt); dt is then adjusted so that n_steps*dt == horizon.
  static SpaceTimeGrid from_horizon(double length, int n_cells, double dt, double horizon);

  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }
  double horizon() const noexcept { return horizon_; }
  int n_cells() const noexcept { return n_cells_; }
  int n_steps() const noexcept { return n_steps_; }
  int n_nodes() const noexcept { return n_cells_ + 1; }
  int n_samples() const noexcept { return n_steps_ + 1; }

  double x(int i) const noexcept { return i * dx_; }
  double t(int n) const noexcept { return n * dt_; }

  /// Courant number u0*dt/dx.
  double courant(double u0) const noexcept { return u0 * dt_ / dx_; }

  /// Checks u0*dt < dx and records the velocity; throws ConfigError naming
  /// u0, dt and dx on violation.
  void validate_cfl(double u0);

  /// True iff validate_cfl succeeded for some velocity.
  bool cfl_admissible() const noexcept { return cfl_ok_; }
  double cfl_velocity() const noexcept { return cfl_velocity_; }

  /// Same spatial and temporal layout (CFL bookkeeping ignored).
  bool same_layout(const SpaceTimeGrid& other) const noexcept;
  bool same_space(const SpaceTimeGrid& other) const noexcept;
  bool same_time(const SpaceTimeGrid& other) const noexcept;

private:
  double length_ = 0.0;
  double dx_ = 0.0;
  double dt_ = 0.0;
  double horizon_ = 0.0;
  int n_cells_ = 0;
  int n_steps_ = 0;
  double cfl_velocity_ = 0.0;
  bool cfl_ok_ = false;
};

/// Nodal values on the spatial axis of a grid.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const SpaceTimeGrid& grid, double fill = 0.0);
  ScalarField(const SpaceTimeGrid& grid, std::vector<double> values);

  const SpaceTimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  int size() const noexcept { return static_cast<int>(values_.size()); }

  bool all_finite() const noexcept;

private:
  SpaceTimeGrid grid_;
  std::vector<double> values_;
};

/// Samples on the time axis of a grid.
class TimeSeries {
public:
  TimeSeries() = default;
  explicit TimeSeries(const SpaceTimeGrid& grid, double fill = 0.0);
  TimeSeries(const SpaceTimeGrid& grid, std::vector<double> values);

  const SpaceTimeGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](int n) const { return values_[n]; }
  double& operator[](int n) { return values_[n]; }
  int size() const noexcept { return static_cast<int>(values_.size()); }

  /// Piecewise-linear value at an arbitrary time in [0, horizon].
  double at(double t) const;

  bool all_finite() const noexcept;

private:
  SpaceTimeGrid grid_;
  std::vector<double> values_;
};

// ---- stencils -------------------------------------------------------------

/// Second-order upwind derivative (3f_i - 4f_{i-1} + f_{i-2}) / (2dx) for
/// i >= 2, first-order (f_1 - f_0)/dx at i = 1, and 0 at the inlet node.
/// Requires f.size() >= 3 and out.size() == f.size().
void upwind_derivative(std::span<const double> f, double dx, std::span<double> out);

/// Transpose of upwind_derivative restricted to nodes 1..N (the inlet node is
/// prescribed and carries no multiplier): out_i = sum_j dD_j/df_i * lam_j.
/// Reads lam[1..N], writes out[1..N], sets out[0] = 0.
void upwind_derivative_transpose(std::span<const double> lam, double dx, std::span<double> out);

ScalarField upwind_derivative(const ScalarField& field);

/// One explicit advection step f - u0*dt*D(f); the inlet value is kept.
/// Throws ConfigError on CFL violation or fewer than 3 nodes.
ScalarField upwind_advect(const ScalarField& field, double u0, double dt);

// ---- quadrature -----------------------------------------------------------

/// Composite trapezoid with uniform spacing h.
double trapezoid(std::span<const double> f, double h);

/// Trapezoid weights for n samples with spacing h (n >= 2).
std::vector<double> trapezoid_weights(int n, double h);

double integrate_space(const ScalarField& field);
double integrate_time(const TimeSeries& series);

/// Weighted inner product sum_n w_n a_n b_n.
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);

} // namespace dryctl
