#include "dryctl/drier_model.hpp"

#include "dryctl/errors.hpp"
#include "dryctl/trajectory_io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dryctl {

void DrierParams::set_inlet_from_mass_flow(double mass_flow, double x_w) {
  if (!(x_w >= 0.0 && x_w <= 1.0))
    throw ConfigError("liquid mass fraction must lie in [0, 1]");
  if (!(area > 0.0) || !(u0 > 0.0))
    throw ConfigError("area and u0 must be set before deriving inlet densities");
  const double flux = mass_flow / area;
  const double rho = flux / u0;
  eps_s0 = (1.0 - x_w) * rho;
  eps_l0 = x_w * rho;
}

void DrierParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("drier parameter '") + name + "' must be positive");
  };
  positive(u0, "u0");
  positive(length, "length");
  positive(k_f, "k_f");
  positive(c_ps, "c_ps");
  positive(c_pl, "c_pl");
  positive(h_l, "h_l");
  positive(area, "area");
  positive(eps_s0, "eps_s0");
  if (!(power >= 0.0))
    throw ConfigError("drier power must be non-negative");
  if (!(X_star >= 0.0))
    throw ConfigError("equilibrium moisture content must be non-negative");
  if (!(eps_l0 >= 0.0))
    throw ConfigError("inlet liquid density must be non-negative");
  if (!std::isfinite(T0) || !std::isfinite(T_ref))
    throw ConfigError("inlet and reference temperatures must be finite");
}

double heat_capacity(const NodeState& s, const DrierParams& p) noexcept {
  return p.c_ps * s.eps_s + p.c_pl * s.eps_l;
}

double drying_rate(const NodeState& s, const DrierParams& p) noexcept {
  const double m = p.k_f * (s.eps_l - p.X_star * s.eps_s);
  return p.clamp_condensation ? std::max(0.0, m) : m;
}

double heat_source_density(const DrierParams& p) {
  if (!(p.power >= 0.0))
    throw ConfigError("power must be non-negative");
  if (!(p.area > 0.0) || !(p.length > 0.0))
    throw ConfigError("area and length must be positive");
  return p.power / (p.area * p.length);
}

double energy_rhs(const NodeState& s, double qdot, const DrierParams& p) {
  const double cap = heat_capacity(s, p);
  if (!(cap > 0.0))
    throw SingularState("heat capacity c_ps*eps_s + c_pl*eps_l vanishes");
  const double m = drying_rate(s, p);
  return (qdot - m * (p.h_l - p.c_pl * (s.T - p.T_ref))) / cap;
}

double peclet_number(const DrierParams& p) {
  if (!(p.k_cond > 0.0))
    throw ConfigError("thermal conductivity must be positive");
  return p.u0 * p.length * heat_capacity(p.inlet(), p) / p.k_cond;
}

// ---------------------------------------------------------------------------

DrierState EquilibriumProfile::to_state() const {
  return {ScalarField(eps_l.grid(), eps_s), eps_l, T};
}

double equilibrium_liquid(const DrierParams& p, double x) {
  const double e = std::exp(-p.k_f * x / p.u0);
  return p.eps_l0 * e + p.eps_s0 * p.X_star * (1.0 - e);
}

namespace {

EquilibriumProfile closed_form_equilibrium(const DrierParams& p, const SpaceTimeGrid& grid, double qdot) {
  EquilibriumProfile eq;
  eq.method = EquilibriumMethod::ClosedForm;
  eq.eps_s = p.eps_s0;
  eq.eps_l = ScalarField(grid);
  eq.T = ScalarField(grid);

  auto liquid = [&](double x) {
    if (p.clamp_condensation && p.eps_l0 <= p.X_star * p.eps_s0)
      return p.eps_l0;
    return equilibrium_liquid(p, x);
  };
  auto slope = [&](double x, double T) { return energy_rhs({p.eps_s0, liquid(x), T}, qdot, p) / p.u0; };

  const double h = grid.dx();
  double T = p.T0;
  eq.T[0] = T;
  eq.eps_l[0] = liquid(0.0);
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double x = grid.x(i);
    const double k1 = slope(x, T);
    const double k2 = slope(x + 0.5 * h, T + 0.5 * h * k1);
    const double k3 = slope(x + 0.5 * h, T + 0.5 * h * k2);
    const double k4 = slope(x + h, T + h * k3);
    T += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    eq.T[i + 1] = T;
    eq.eps_l[i + 1] = liquid(grid.x(i + 1));
  }
  return eq;
}

// Node-by-node solve of u0 D_i(f) = a_i f_i + b_i, which is the steady state
// of the explicit march (the source is affine in the marched variable).
template <class Coeffs>
void march_steady(int nn, double u0, double dx, double f0, Coeffs coeffs, std::span<double> f) {
  f[0] = f0;
  {
    auto [a, b] = coeffs(1, f);
    f[1] = (u0 * f[0] / dx + b) / (u0 / dx - a);
  }
  for (int i = 2; i < nn; ++i) {
    auto [a, b] = coeffs(i, f);
    f[i] = (u0 * (4.0 * f[i - 1] - f[i - 2]) / (2.0 * dx) + b) / (1.5 * u0 / dx - a);
  }
}

EquilibriumProfile scheme_equilibrium(const DrierParams& p, const SpaceTimeGrid& grid, double qdot) {
  EquilibriumProfile eq;
  eq.method = EquilibriumMethod::SchemeConsistent;
  eq.eps_s = p.eps_s0;
  eq.eps_l = ScalarField(grid);
  eq.T = ScalarField(grid);
  const int nn = grid.n_nodes();
  const double dx = grid.dx();
  const bool frozen_liquid = p.clamp_condensation && p.eps_l0 <= p.X_star * p.eps_s0;

  march_steady(nn, p.u0, dx, p.eps_l0,
               [&](int, std::span<double>) -> std::pair<double, double> {
                 if (frozen_liquid)
                   return {0.0, 0.0};
                 return {-p.k_f, p.k_f * p.X_star * p.eps_s0};
               },
               eq.eps_l.values());

  march_steady(nn, p.u0, dx, p.T0,
               [&](int i, std::span<double>) -> std::pair<double, double> {
                 const NodeState s{p.eps_s0, eq.eps_l[i], 0.0};
                 const double cap = heat_capacity(s, p);
                 if (!(cap > 0.0))
                   throw SingularState("heat capacity vanishes on the equilibrium profile");
                 const double m = drying_rate(s, p);
                 return {m * p.c_pl / cap, (qdot - m * (p.h_l + p.c_pl * p.T_ref)) / cap};
               },
               eq.T.values());
  return eq;
}

} // namespace

EquilibriumProfile solve_equilibrium(const DrierParams& p, const SpaceTimeGrid& grid, EquilibriumMethod method,
                                     std::optional<double> qdot) {
  p.validate();
  if (std::abs(grid.length() - p.length) > 1e-12 * p.length)
    throw ConfigError("grid length does not match the drier length");
  const double q = qdot.value_or(heat_source_density(p));
  return method == EquilibriumMethod::ClosedForm ? closed_form_equilibrium(p, grid, q)
                                                 : scheme_equilibrium(p, grid, q);
}

// ---------------------------------------------------------------------------

NodeState DrierTrajectory::node(int n, int i) const {
  const std::size_t k = static_cast<std::size_t>(n) * grid.n_nodes() + i;
  return {eps_s[k], eps_l[k], T[k]};
}

void DrierTrajectory::read_slice(int n, std::span<double> es, std::span<double> el, std::span<double> temp) const {
  if (!has_full())
    throw ConfigError("trajectory was recorded without the full space-time history");
  const auto nn = static_cast<std::size_t>(grid.n_nodes());
  const auto off = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(n) * nn);
  std::copy_n(eps_s.begin() + off, nn, es.begin());
  std::copy_n(eps_l.begin() + off, nn, el.begin());
  std::copy_n(T.begin() + off, nn, temp.begin());
}

DrierState DrierTrajectory::slice(int n) const {
  DrierState s{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
  read_slice(n, s.eps_s.values(), s.eps_l.values(), s.T.values());
  return s;
}

DrierTrajectory solve_forward_nonlinear(const DrierParams& p, const ControlSignal& qdot, const DrierInlet& inlet,
                                        const SpaceTimeGrid& grid_in, const ForwardOptions& options) {
  p.validate();
  SpaceTimeGrid grid = grid_in;
  grid.validate_cfl(p.u0);
  if (!qdot.grid().same_time(grid))
    throw ConfigError("heat-source control is not sampled on the solver time grid");
  if (std::abs(grid.length() - p.length) > 1e-12 * p.length)
    throw ConfigError("grid length does not match the drier length");

  const int nn = grid.n_nodes();
  const auto nsz = static_cast<std::size_t>(nn);
  const double dt = grid.dt();
  const double c = p.u0 * dt / grid.dx();
  const double hc = 0.5 * c;

  DrierState init = options.initial ? *options.initial : solve_equilibrium(p, grid).to_state();
  if (init.T.size() != nn || init.eps_s.size() != nn || init.eps_l.size() != nn)
    throw ConfigError("initial drier state does not match the grid");

  std::vector<double> es(init.eps_s.values().begin(), init.eps_s.values().end());
  std::vector<double> el(init.eps_l.values().begin(), init.eps_l.values().end());
  std::vector<double> te(init.T.values().begin(), init.T.values().end());
  {
    const NodeState in0 = inlet.at(0.0);
    es[0] = in0.eps_s;
    el[0] = in0.eps_l;
    te[0] = in0.T;
  }
  std::vector<double> es2(nsz), el2(nsz), te2(nsz);

  DrierTrajectory traj;
  traj.grid = grid;
  traj.outlet_T = TimeSeries(grid);
  traj.outlet_X = TimeSeries(grid);
  if (options.keep_full) {
    const std::size_t total = nsz * static_cast<std::size_t>(grid.n_samples());
    traj.eps_s.resize(total);
    traj.eps_l.resize(total);
    traj.T.resize(total);
  }

  auto record = [&](int n) {
    traj.outlet_T[n] = te[nn - 1];
    traj.outlet_X[n] = el[nn - 1] / es[nn - 1];
    if (options.keep_full) {
      const auto off = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(n) * nsz);
      std::copy(es.begin(), es.end(), traj.eps_s.begin() + off);
      std::copy(el.begin(), el.end(), traj.eps_l.begin() + off);
      std::copy(te.begin(), te.end(), traj.T.begin() + off);
    }
    if (options.dump)
      options.dump->write_slice(es, el, te);
  };
  record(0);

  const double kf = p.k_f;
  const double Xs = p.X_star;
  const bool clamp = p.clamp_condensation;
  for (int n = 0; n < grid.n_steps(); ++n) {
    const double q = qdot[n];
    const NodeState in = inlet.at(grid.t(n + 1));
    es2[0] = in.eps_s;
    el2[0] = in.eps_l;
    te2[0] = in.T;
    bool bad = false;
    for (int i = 1; i < nn; ++i) {
      double ds, dl, dT;
      if (i == 1) {
        ds = c * (es[1] - es[0]);
        dl = c * (el[1] - el[0]);
        dT = c * (te[1] - te[0]);
      } else {
        ds = hc * (3.0 * es[i] - 4.0 * es[i - 1] + es[i - 2]);
        dl = hc * (3.0 * el[i] - 4.0 * el[i - 1] + el[i - 2]);
        dT = hc * (3.0 * te[i] - 4.0 * te[i - 1] + te[i - 2]);
      }
      double m = kf * (el[i] - Xs * es[i]);
      if (clamp && m < 0.0)
        m = 0.0;
      const double cap = p.c_ps * es[i] + p.c_pl * el[i];
      const double H = (q - m * (p.h_l - p.c_pl * (te[i] - p.T_ref))) / cap;
      es2[i] = es[i] - ds;
      el2[i] = el[i] - dl - dt * m;
      te2[i] = te[i] - dT + dt * H;
      bad |= !(es2[i] > 0.0) || !std::isfinite(te2[i]) || !std::isfinite(el2[i]) || !(cap > 0.0);
    }
    if (bad)
      throw DivergenceError("drier model produced a non-finite state or non-positive solid density", n + 1);
    std::swap(es, es2);
    std::swap(el, el2);
    std::swap(te, te2);
    record(n + 1);
  }
  traj.final_state = {ScalarField(grid, es), ScalarField(grid, el), ScalarField(grid, te)};
  return traj;
}

} // namespace dryctl
