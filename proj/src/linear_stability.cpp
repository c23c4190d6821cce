#include "dryctl/linear_stability.hpp"

#include "dryctl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dryctl {

Mat3 assemble_jacobian(const NodeState& s, const DrierParams& p) {
  return assemble_jacobian(s, p, heat_source_density(p));
}

Mat3 assemble_jacobian(const NodeState& s, const DrierParams& p, double qdot) {
  const double cap = heat_capacity(s, p);
  if (!(cap > 0.0))
    throw SingularState("heat capacity c_ps*eps_s + c_pl*eps_l vanishes");
  double m = p.k_f * (s.eps_l - p.X_star * s.eps_s);
  double dm_ds = -p.k_f * p.X_star;
  double dm_dl = p.k_f;
  if (p.clamp_condensation && m < 0.0) {
    m = 0.0;
    dm_ds = 0.0;
    dm_dl = 0.0;
  }
  const double latent = p.h_l - p.c_pl * (s.T - p.T_ref);
  const double H = (qdot - m * latent) / cap;

  Mat3 J;
  J(1, 0) = -dm_ds;
  J(1, 1) = -dm_dl;
  J(1, 2) = 0.0;
  J(2, 0) = (-dm_ds * latent - H * p.c_ps) / cap;
  J(2, 1) = (-dm_dl * latent - H * p.c_pl) / cap;
  J(2, 2) = m * p.c_pl / cap;
  return J;
}

double heat_input_gain(const NodeState& s, const DrierParams& p) {
  const double cap = heat_capacity(s, p);
  if (!(cap > 0.0))
    throw SingularState("heat capacity c_ps*eps_s + c_pl*eps_l vanishes");
  return 1.0 / cap;
}

std::vector<Mat3> jacobian_field(const EquilibriumProfile& eq, const DrierParams& p) {
  std::vector<Mat3> out(static_cast<std::size_t>(eq.T.size()));
  for (int i = 0; i < eq.T.size(); ++i)
    out[static_cast<std::size_t>(i)] = assemble_jacobian(eq.node(i), p);
  return out;
}

ScalarField positive_eigenvalue_profile(const EquilibriumProfile& eq, const DrierParams& p) {
  const auto& g = eq.T.grid();
  ScalarField lam(g, 0.0);
  double prev = assemble_jacobian(eq.node(0), p)(2, 2);
  for (int i = 1; i < eq.T.size(); ++i) {
    const double cur = assemble_jacobian(eq.node(i), p)(2, 2);
    lam[i] = lam[i - 1] + 0.5 * g.dx() * (prev + cur);
    prev = cur;
  }
  return lam;
}

EigenvalueIntegral positive_eigenvalue_integral(const EquilibriumProfile& eq, const DrierParams& p, double x) {
  const auto& g = eq.T.grid();
  if (!(x >= 0.0) || x > g.length() * (1.0 + 1e-12))
    throw DomainError("position outside the drier");
  const ScalarField lam = positive_eigenvalue_profile(eq, p);
  const double s = std::min(x / g.dx(), static_cast<double>(g.n_cells()));
  const int i = std::min(static_cast<int>(s), g.n_cells() - 1);
  const double w = s - i;
  EigenvalueIntegral r;
  r.value = (1.0 - w) * lam[i] + w * lam[i + 1];
  r.growth_factor = std::exp(r.value / p.u0);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

bool is_zero(const Signal& s) {
  if (!s.is_waveform())
    return false;
  const Waveform& w = s.waveform();
  return w.mean == 0.0 && w.amplitude == 0.0;
}

} // namespace

LinearDrierSystem::LinearDrierSystem(const EquilibriumProfile& eq, const DrierParams& p,
                                     const PerturbationInlet& inlet, const SpaceTimeGrid& grid)
    : eq_(eq), p_(p), grid_(grid) {
  p_.validate();
  grid_.validate_cfl(p_.u0);
  if (!eq_.T.grid().same_space(grid_))
    throw ConfigError("equilibrium profile is not on the solver grid");
  jac_ = jacobian_field(eq_, p_);
  eta_ = ScalarField(grid_);
  for (int i = 0; i < grid_.n_nodes(); ++i)
    eta_[i] = heat_input_gain(eq_.node(i), p_);

  const auto ns = static_cast<std::size_t>(grid_.n_samples());
  in_s_.resize(ns);
  in_l_.resize(ns);
  in_T_.resize(ns);
  for (int n = 0; n < grid_.n_samples(); ++n) {
    const double t = grid_.t(n);
    in_s_[static_cast<std::size_t>(n)] = inlet.d_eps_s.value(t);
    in_l_[static_cast<std::size_t>(n)] = inlet.d_eps_l.value(t);
    in_T_[static_cast<std::size_t>(n)] = inlet.d_T.value(t);
  }
  densities_forced_ = !(is_zero(inlet.d_eps_s) && is_zero(inlet.d_eps_l));
}

namespace {

struct Workspace {
  std::vector<double> s, l, T, s2, l2, T2;
  explicit Workspace(std::size_t n) : s(n), l(n), T(n), s2(n), l2(n), T2(n) {}
};

inline double upwind_increment(const std::vector<double>& f, int i, double c, double hc) {
  return i == 1 ? c * (f[1] - f[0]) : hc * (3.0 * f[static_cast<std::size_t>(i)] - 4.0 * f[static_cast<std::size_t>(i - 1)] +
                                            f[static_cast<std::size_t>(i - 2)]);
}

} // namespace

LinearTrajectory LinearDrierSystem::solve(std::span<const double> dq, const LinearOptions& options) const {
  if (static_cast<int>(dq.size()) != grid_.n_samples())
    throw ConfigError("control perturbation is not sampled on the solver time grid");
  const int nn = grid_.n_nodes();
  const auto nsz = static_cast<std::size_t>(nn);
  Workspace w(nsz);
  bool densities = densities_forced_;
  if (options.initial) {
    const DrierState& init = *options.initial;
    if (init.T.size() != nn || init.eps_s.size() != nn || init.eps_l.size() != nn)
      throw ConfigError("initial perturbation does not match the grid");
    std::copy(init.eps_s.values().begin(), init.eps_s.values().end(), w.s.begin());
    std::copy(init.eps_l.values().begin(), init.eps_l.values().end(), w.l.begin());
    std::copy(init.T.values().begin(), init.T.values().end(), w.T.begin());
    for (int i = 0; i < nn && !densities; ++i)
      densities = w.s[static_cast<std::size_t>(i)] != 0.0 || w.l[static_cast<std::size_t>(i)] != 0.0;
  }
  w.s[0] = in_s_[0];
  w.l[0] = in_l_[0];
  w.T[0] = in_T_[0];

  LinearTrajectory out;
  out.grid = grid_;
  out.outlet_eps_s = TimeSeries(grid_);
  out.outlet_eps_l = TimeSeries(grid_);
  out.outlet_T = TimeSeries(grid_);

  const double dt = grid_.dt();
  const double c = p_.u0 * dt / grid_.dx();
  const double hc = 0.5 * c;
  const double ref_s = std::abs(eq_.eps_s);

  auto record = [&](int n) {
    out.outlet_eps_s[n] = w.s[nsz - 1];
    out.outlet_eps_l[n] = w.l[nsz - 1];
    out.outlet_T[n] = w.T[nsz - 1];
    for (int i = 0; i < nn; ++i) {
      const auto k = static_cast<std::size_t>(i);
      double r = std::abs(w.T[k]) / std::max(std::abs(eq_.T[i]), 1e-300);
      if (densities) {
        r = std::max(r, std::abs(w.s[k]) / ref_s);
        r = std::max(r, std::abs(w.l[k]) / std::max(std::abs(eq_.eps_l[i]), 1e-300));
      }
      out.max_relative_amplitude = std::max(out.max_relative_amplitude, r);
    }
    if (options.snapshot_stride > 0 && n % options.snapshot_stride == 0) {
      out.snapshot_steps.push_back(n);
      out.snapshots.push_back({ScalarField(grid_, w.s), ScalarField(grid_, w.l), ScalarField(grid_, w.T)});
    }
  };
  record(0);

  for (int n = 0; n < grid_.n_steps(); ++n) {
    const double q = dq[static_cast<std::size_t>(n)];
    const auto next = static_cast<std::size_t>(n + 1);
    w.s2[0] = in_s_[next];
    w.l2[0] = in_l_[next];
    w.T2[0] = in_T_[next];
    for (int i = 1; i < nn; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const Mat3& J = jac_[k];
      double src_T = J(2, 2) * w.T[k] + eta_[i] * q;
      if (densities) {
        w.s2[k] = w.s[k] - upwind_increment(w.s, i, c, hc);
        w.l2[k] = w.l[k] - upwind_increment(w.l, i, c, hc) + dt * (J(1, 0) * w.s[k] + J(1, 1) * w.l[k]);
        src_T += J(2, 0) * w.s[k] + J(2, 1) * w.l[k];
      }
      w.T2[k] = w.T[k] - upwind_increment(w.T, i, c, hc) + dt * src_T;
    }
    if (!std::isfinite(w.T2[nsz - 1]))
      throw DivergenceError("linearized drier model produced a non-finite state", n + 1);
    std::swap(w.s, w.s2);
    std::swap(w.l, w.l2);
    std::swap(w.T, w.T2);
    record(n + 1);
  }
  out.final_state = {ScalarField(grid_, w.s), ScalarField(grid_, w.l), ScalarField(grid_, w.T)};
  if (!out.final_state.T.all_finite())
    throw DivergenceError("linearized drier model produced a non-finite state", grid_.n_steps());
  out.left_linear_regime = out.max_relative_amplitude > options.linear_regime_limit;
  return out;
}

void LinearDrierSystem::outlet_temperature(std::span<const double> dq, std::span<double> outlet) const {
  if (static_cast<int>(dq.size()) != grid_.n_samples() || outlet.size() != dq.size())
    throw ConfigError("control perturbation is not sampled on the solver time grid");
  if (densities_forced_) {
    const LinearTrajectory tr = solve(dq);
    std::copy(tr.outlet_T.values().begin(), tr.outlet_T.values().end(), outlet.begin());
    return;
  }
  // Without density forcing only the temperature row is active.
  const int nn = grid_.n_nodes();
  const auto nsz = static_cast<std::size_t>(nn);
  std::vector<double> T(nsz, 0.0), T2(nsz), a(nsz), e(nsz);
  for (int i = 0; i < nn; ++i) {
    a[static_cast<std::size_t>(i)] = jac_[static_cast<std::size_t>(i)](2, 2);
    e[static_cast<std::size_t>(i)] = eta_[i];
  }
  const double dt = grid_.dt();
  const double c = p_.u0 * dt / grid_.dx();
  const double hc = 0.5 * c;
  T[0] = in_T_[0];
  outlet[0] = T[nsz - 1];
  for (int n = 0; n < grid_.n_steps(); ++n) {
    const double q = dq[static_cast<std::size_t>(n)];
    T2[0] = in_T_[static_cast<std::size_t>(n + 1)];
    T2[1] = T[1] - c * (T[1] - T[0]) + dt * (a[1] * T[1] + e[1] * q);
    for (std::size_t k = 2; k < nsz; ++k)
      T2[k] = T[k] - hc * (3.0 * T[k] - 4.0 * T[k - 1] + T[k - 2]) + dt * (a[k] * T[k] + e[k] * q);
    std::swap(T, T2);
    outlet[static_cast<std::size_t>(n + 1)] = T[nsz - 1];
  }
  for (double v : outlet)
    if (!std::isfinite(v))
      throw DivergenceError("linearized drier model produced a non-finite state", grid_.n_steps());
}

LinearTrajectory solve_forward_linear(const EquilibriumProfile& eq, const DrierParams& p, const PerturbationInlet& inlet,
                                      const ControlSignal& dqdot, const SpaceTimeGrid& grid,
                                      const LinearOptions& options) {
  if (!dqdot.grid().same_time(grid))
    throw ConfigError("control perturbation is not sampled on the solver time grid");
  const LinearDrierSystem sys(eq, p, inlet, grid);
  return sys.solve(dqdot.values.values(), options);
}

// ---------------------------------------------------------------------------

std::complex<double> frequency_domain_control(const EquilibriumProfile& eq, const DrierParams& p, double omega,
                                              const InletAmplitudes& inlet) {
  using cd = std::complex<double>;
  const auto& g = eq.T.grid();
  const int nn = eq.T.size();
  const double u0 = p.u0;
  const ScalarField lam = positive_eigenvalue_profile(eq, p);
  const cd i1(0.0, 1.0);

  std::vector<cd> num(static_cast<std::size_t>(nn)), den(static_cast<std::size_t>(nn));
  double den_scale = 0.0;
  for (int i = 0; i < nn; ++i) {
    const double x = g.x(i);
    const NodeState s = eq.node(i);
    const Mat3 J = assemble_jacobian(s, p);
    const double eta = heat_input_gain(s, p);
    const cd carrier = std::exp(-i1 * omega * x / u0);
    const double relax = std::exp(-p.k_f * x / u0);
    const cd d_s = inlet.eps_s * carrier;
    const cd d_l = inlet.eps_l * carrier * relax + p.X_star * inlet.eps_s * carrier * (1.0 - relax);
    const cd rho = J(2, 0) * d_s + J(2, 1) * d_l;
    const cd mu = std::exp(i1 * omega * x / u0 - lam[i] / u0);
    num[static_cast<std::size_t>(i)] = rho / u0 * mu;
    den[static_cast<std::size_t>(i)] = eta / u0 * mu;
    den_scale = std::max(den_scale, eta / u0 * std::exp(-lam[i] / u0));
  }
  auto trap = [&](const std::vector<cd>& f) {
    cd s = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k)
      s += f[k];
    return s * g.dx();
  };
  const cd denominator = trap(den);
  if (std::abs(denominator) <= 1e-12 * den_scale * g.length())
    throw NoControlExists("frequency-domain control denominator vanishes at this frequency");
  return -(inlet.T + trap(num)) / denominator;
}

ControlSignal harmonic_control(std::complex<double> amplitude, double omega, const SpaceTimeGrid& grid,
                               ControlKind kind) {
  ControlSignal q{TimeSeries(grid), kind};
  for (int n = 0; n < grid.n_samples(); ++n) {
    const double t = grid.t(n);
    q.values[n] = amplitude.real() * std::cos(omega * t) - amplitude.imag() * std::sin(omega * t);
  }
  return q;
}

} // namespace dryctl
