#pragma once

// Linearization of the drier model about a reference state. Perturbations
// are ordered (d_eps_s, d_eps_l, d_T) everywhere in this header.

#include "dryctl/drier_model.hpp"

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace dryctl {

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> a{};

  double operator()(int r, int c) const noexcept { return a[static_cast<std::size_t>(3 * r + c)]; }
  double& operator()(int r, int c) noexcept { return a[static_cast<std::size_t>(3 * r + c)]; }
};

/// Partial derivatives of (0, -mdot, H) with respect to (eps_s, eps_l, T).
/// Row 0 is identically zero. With clamp_condensation set and mdot < 0 the
/// drying terms vanish. H is evaluated at qdot = P/(A l) unless given.
/// Throws SingularState when the heat capacity vanishes.
Mat3 assemble_jacobian(const NodeState& s, const DrierParams& p);
Mat3 assemble_jacobian(const NodeState& s, const DrierParams& p, double qdot);

/// dH/dqdot = 1 / (c_ps eps_s + c_pl eps_l).
double heat_input_gain(const NodeState& s, const DrierParams& p);

/// Per-node Jacobians along an equilibrium profile.
std::vector<Mat3> jacobian_field(const EquilibriumProfile& eq, const DrierParams& p);

/// Running integral lambda_+(x_i) = int_0^{x_i} dH/dT dx' (trapezoid on the
/// profile's grid).
ScalarField positive_eigenvalue_profile(const EquilibriumProfile& eq, const DrierParams& p);

struct EigenvalueIntegral {
  double value = 0.0;
  /// exp(value / u0): amplification of an inlet temperature disturbance.
  double growth_factor = 1.0;
};

/// lambda_+(x), linearly interpolated between nodes. Throws DomainError for x
/// outside [0, length].
EigenvalueIntegral positive_eigenvalue_integral(const EquilibriumProfile& eq, const DrierParams& p, double x);

// ---------------------------------------------------------------------------

/// Inlet perturbations as functions of time.
struct PerturbationInlet {
  Signal d_eps_s = Waveform::constant(0.0);
  Signal d_eps_l = Waveform::constant(0.0);
  Signal d_T = Waveform::constant(0.0);
};

struct LinearOptions {
  /// Initial perturbation; zero when empty.
  std::optional<DrierState> initial;
  /// Keep every `snapshot_stride`-th slice (0 keeps none).
  int snapshot_stride = 0;
  /// Relative amplitude above which the run is flagged as leaving the linear regime.
  double linear_regime_limit = 0.1;
};

struct LinearTrajectory {
  SpaceTimeGrid grid;
  TimeSeries outlet_eps_s;
  TimeSeries outlet_eps_l;
  TimeSeries outlet_T;
  DrierState final_state;
  std::vector<int> snapshot_steps;
  std::vector<DrierState> snapshots;
  /// Largest |perturbation| / |reference| over all nodes, components and samples.
  double max_relative_amplitude = 0.0;
  bool left_linear_regime = false;
};

/// The linearized drier with its Jacobian frozen on an equilibrium profile.
/// Precomputes per-node coefficients and inlet samples so that repeated
/// solves with different controls (as in a descent loop) are cheap.
class LinearDrierSystem {
public:
  LinearDrierSystem(const EquilibriumProfile& eq, const DrierParams& p, const PerturbationInlet& inlet,
                    const SpaceTimeGrid& grid);

  const SpaceTimeGrid& grid() const noexcept { return grid_; }
  const EquilibriumProfile& equilibrium() const noexcept { return eq_; }
  const DrierParams& params() const noexcept { return p_; }
  std::span<const Mat3> jacobian() const noexcept { return jac_; }
  /// heat_input_gain along the profile.
  const ScalarField& gain() const noexcept { return eta_; }

  /// Full solve with diagnostics.
  LinearTrajectory solve(std::span<const double> dqdot, const LinearOptions& options = {}) const;

  /// Outlet temperature perturbation only, zero initial state.
  void outlet_temperature(std::span<const double> dqdot, std::span<double> outlet) const;

private:
  EquilibriumProfile eq_;
  DrierParams p_;
  SpaceTimeGrid grid_;
  std::vector<Mat3> jac_;
  ScalarField eta_;
  std::vector<double> in_s_, in_l_, in_T_;
  bool densities_forced_ = false;
};

/// Convenience wrapper around LinearDrierSystem::solve.
LinearTrajectory solve_forward_linear(const EquilibriumProfile& eq, const DrierParams& p, const PerturbationInlet& inlet,
                                      const ControlSignal& dqdot, const SpaceTimeGrid& grid,
                                      const LinearOptions& options = {});

// ---------------------------------------------------------------------------

/// Complex inlet amplitudes a with perturbation Re(a e^{i omega t}); a sine of
/// amplitude A corresponds to a = -iA.
struct InletAmplitudes {
  std::complex<double> eps_s{};
  std::complex<double> eps_l{};
  std::complex<double> T{};
};

/// Control amplitude that cancels the outlet temperature response of the
/// linearized model at angular frequency omega (time signal Re(q e^{i omega t})).
/// Quadratures use the trapezoid rule on the equilibrium grid. Throws
/// NoControlExists when the denominator is negligible.
std::complex<double> frequency_domain_control(const EquilibriumProfile& eq, const DrierParams& p, double omega,
                                              const InletAmplitudes& inlet);

/// Samples Re(amplitude e^{i omega t}) on the grid.
ControlSignal harmonic_control(std::complex<double> amplitude, double omega, const SpaceTimeGrid& grid,
                               ControlKind kind = ControlKind::HeatDensityPerturbation);

} // namespace dryctl
