#include "dryctl/optimal_control.hpp"

#include "dryctl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dryctl {

double cost(std::span<const double> outlet, double dt, double T_star) {
  if (outlet.size() < 2)
    return 0.0;
  double s = 0.0;
  for (std::size_t n = 0; n < outlet.size(); ++n) {
    const double r = outlet[n] - T_star;
    const double w = (n == 0 || n + 1 == outlet.size()) ? 0.5 : 1.0;
    s += w * r * r;
  }
  return 0.5 * dt * s;
}

double cost(const TimeSeries& outlet, double T_star) { return cost(outlet.values(), outlet.grid().dt(), T_star); }

ScalarField AdjointTrajectory::temperature_slice(int n) const {
  const auto nn = static_cast<std::size_t>(grid.n_nodes());
  const auto off = static_cast<std::ptrdiff_t>(nn * static_cast<std::size_t>(n));
  return ScalarField(grid, std::vector<double>(psi_T.begin() + off, psi_T.begin() + off + static_cast<std::ptrdiff_t>(nn)));
}

void direction_to_gradient(std::span<const double> direction, const SpaceTimeGrid& grid, std::span<double> gradient) {
  const std::size_t m = direction.size();
  if (static_cast<int>(m) != grid.n_samples() || gradient.size() != m)
    throw ConfigError("search direction is not sampled on the time grid");
  for (std::size_t n = 0; n < m; ++n)
    gradient[n] = -direction[n];
  gradient[0] *= 2.0;
  gradient[m - 1] *= 2.0;
}

TimeSeries direction_to_gradient(const TimeSeries& direction) {
  TimeSeries g(direction.grid());
  direction_to_gradient(direction.values(), direction.grid(), g.values());
  return g;
}

namespace {

// Transposed upwind increment of the forward step at node i (1..N); the
// inlet node carries no multiplier.
inline double transposed_increment(const std::vector<double>& lam, std::size_t i, std::size_t last, double c) {
  const double a1 = i + 1 <= last ? lam[i + 1] : 0.0;
  const double a2 = i + 2 <= last ? lam[i + 2] : 0.0;
  if (i == 1)
    return c * (lam[1] - 2.0 * a1 + 0.5 * a2);
  return c * (1.5 * lam[i] - 2.0 * a1 + 0.5 * a2);
}

void check_series(std::span<const double> s, const SpaceTimeGrid& grid, const char* what) {
  if (static_cast<int>(s.size()) != grid.n_samples())
    throw ConfigError(std::string(what) + " is not sampled on the time grid");
  for (double v : s)
    if (!std::isfinite(v))
      throw ConfigError(std::string(what) + " contains non-finite values");
}

// One-equation backward sweep; psi is stored when `psi` is non-null.
void simple_sweep(const SimpleModelParams& params, std::span<const double> outlet, const SpaceTimeGrid& grid_in,
                  std::span<double> direction, std::vector<double>* psi) {
  params.validate();
  SpaceTimeGrid grid = grid_in;
  grid.validate_cfl(params.u0);
  check_series(outlet, grid, "forward outlet series");
  const int nn = grid.n_nodes();
  const std::size_t last = static_cast<std::size_t>(nn - 1);
  const int M = grid.n_steps();
  const double dt = grid.dt();
  const double dx = grid.dx();
  const double c = params.u0 * dt / dx;
  const double decay = 1.0 - params.k * dt;

  std::vector<double> lam(last + 1, 0.0), next(last + 1, 0.0);
  if (psi)
    psi->assign((last + 1) * static_cast<std::size_t>(grid.n_samples()), 0.0);

  for (int n = M; n >= 0; --n) {
    // lam holds lambda^{n+1}.
    double sum = 0.0;
    for (std::size_t i = 1; i <= last; ++i)
      sum += lam[i];
    direction[static_cast<std::size_t>(n)] = -params.k * sum;
    if (psi) {
      double* row = psi->data() + static_cast<std::size_t>(n) * (last + 1);
      for (std::size_t i = 1; i < last; ++i)
        row[i] = -lam[i] / dx;
      row[last] = -lam[last] / (0.5 * dx);
    }
    if (n == 0)
      break;
    const double w = (n == M) ? 0.5 * dt : dt;
    for (std::size_t i = 1; i <= last; ++i)
      next[i] = decay * lam[i] - transposed_increment(lam, i, last, c);
    next[last] += w * (outlet[static_cast<std::size_t>(n)] - params.T_star);
    std::swap(lam, next);
  }
}

} // namespace

AdjointTrajectory solve_adjoint_simple(const SimpleModelParams& params, const TimeSeries& outlet,
                                       const SpaceTimeGrid& grid) {
  if (!outlet.grid().same_time(grid))
    throw ConfigError("forward outlet series is not on the adjoint time grid");
  AdjointTrajectory adj;
  adj.grid = grid;
  std::vector<double> dir(static_cast<std::size_t>(grid.n_samples()));
  simple_sweep(params, outlet.values(), grid, dir, &adj.psi_T);
  return adj;
}

TimeSeries gradient_simple(const AdjointTrajectory& adjoint, const SimpleModelParams& params) {
  const auto& g = adjoint.grid;
  TimeSeries d(g);
  const auto nn = static_cast<std::size_t>(g.n_nodes());
  for (int n = 0; n < g.n_samples(); ++n)
    d[n] = params.k * trapezoid(std::span(adjoint.psi_T).subspan(nn * static_cast<std::size_t>(n), nn), g.dx());
  return d;
}

void simple_direction(const SimpleModelParams& params, std::span<const double> outlet, const SpaceTimeGrid& grid,
                      std::span<double> direction) {
  if (direction.size() != outlet.size())
    throw ConfigError("direction buffer does not match the outlet series");
  simple_sweep(params, outlet, grid, direction, nullptr);
}

// ---------------------------------------------------------------------------

FrozenJacobian::FrozenJacobian(const LinearDrierSystem& system)
    : grid_(system.grid()), u0_(system.params().u0), jac_(system.jacobian().begin(), system.jacobian().end()),
      gain_(system.gain().values().begin(), system.gain().values().end()) {}

FrozenJacobian::FrozenJacobian(const EquilibriumProfile& eq, const DrierParams& p, const SpaceTimeGrid& grid)
    : grid_(grid), u0_(p.u0), jac_(jacobian_field(eq, p)) {
  if (!eq.T.grid().same_space(grid))
    throw ConfigError("equilibrium profile is not on the adjoint grid");
  gain_.resize(jac_.size());
  for (int i = 0; i < eq.T.size(); ++i)
    gain_[static_cast<std::size_t>(i)] = heat_input_gain(eq.node(i), p);
}

void FrozenJacobian::slice(int, std::span<Mat3> jac, std::span<double> gain) {
  std::copy(jac_.begin(), jac_.end(), jac.begin());
  std::copy(gain_.begin(), gain_.end(), gain.begin());
}

TrajectoryJacobian::TrajectoryJacobian(TrajectorySource& source, const DrierParams& p, std::span<const double> qdot)
    : source_(source), p_(p), q_(qdot.begin(), qdot.end()) {
  const auto nn = static_cast<std::size_t>(source_.grid().n_nodes());
  if (static_cast<int>(q_.size()) != source_.grid().n_samples())
    throw ConfigError("control is not sampled on the trajectory's time grid");
  es_.resize(nn);
  el_.resize(nn);
  te_.resize(nn);
}

void TrajectoryJacobian::slice(int n, std::span<Mat3> jac, std::span<double> gain) {
  source_.read_slice(n, es_, el_, te_);
  const double q = q_[static_cast<std::size_t>(n)];
  for (std::size_t i = 0; i < es_.size(); ++i) {
    const NodeState s{es_[i], el_[i], te_[i]};
    jac[i] = assemble_jacobian(s, p_, q);
    gain[i] = heat_input_gain(s, p_);
  }
}

DrierAdjointResult solve_adjoint_drier(JacobianProvider& provider, const TimeSeries& mismatch, bool keep_full) {
  SpaceTimeGrid grid = provider.grid();
  const double u0 = provider.velocity();
  grid.validate_cfl(u0);
  if (!mismatch.grid().same_time(grid))
    throw ConfigError("outlet mismatch is not on the trajectory's time grid");
  check_series(mismatch.values(), grid, "outlet mismatch");

  const int nn = grid.n_nodes();
  const auto nsz = static_cast<std::size_t>(nn);
  const std::size_t last = nsz - 1;
  const int M = grid.n_steps();
  const double dt = grid.dt();
  const double dx = grid.dx();
  const double c = u0 * dt / dx;

  DrierAdjointResult res;
  res.direction = TimeSeries(grid);
  res.adjoint.grid = grid;
  if (keep_full) {
    const std::size_t total = nsz * static_cast<std::size_t>(grid.n_samples());
    res.adjoint.psi_s.assign(total, 0.0);
    res.adjoint.psi_l.assign(total, 0.0);
    res.adjoint.psi_T.assign(total, 0.0);
  }

  std::vector<Mat3> jac(nsz);
  std::vector<double> gain(nsz);
  std::vector<double> ls(nsz, 0.0), ll(nsz, 0.0), lT(nsz, 0.0);
  std::vector<double> ns(nsz, 0.0), nl(nsz, 0.0), nT(nsz, 0.0);
  const bool frozen = provider.frozen();
  if (frozen)
    provider.slice(M, jac, gain);

  for (int n = M; n >= 0; --n) {
    if (!frozen)
      provider.slice(n, jac, gain);
    double d = 0.0;
    for (std::size_t i = 1; i <= last; ++i)
      d -= gain[i] * lT[i];
    res.direction[n] = d;
    if (keep_full) {
      const std::size_t off = nsz * static_cast<std::size_t>(n);
      for (std::size_t i = 1; i <= last; ++i) {
        const double s = i == last ? 0.5 * dx : dx;
        res.adjoint.psi_s[off + i] = -ls[i] / s;
        res.adjoint.psi_l[off + i] = -ll[i] / s;
        res.adjoint.psi_T[off + i] = -lT[i] / s;
      }
    }
    if (n == 0)
      break;
    // The temperature multiplier is closed on itself (dmdot/dT = 0), so the
    // density multipliers are only advanced when they are stored.
    for (std::size_t i = 1; i <= last; ++i) {
      const Mat3& J = jac[i];
      nT[i] = lT[i] + dt * J(2, 2) * lT[i] - transposed_increment(lT, i, last, c);
      if (keep_full) {
        ns[i] = ls[i] + dt * (J(1, 0) * ll[i] + J(2, 0) * lT[i]) - transposed_increment(ls, i, last, c);
        nl[i] = ll[i] + dt * (J(1, 1) * ll[i] + J(2, 1) * lT[i]) - transposed_increment(ll, i, last, c);
      }
    }
    const double w = (n == M) ? 0.5 * dt : dt;
    nT[last] += w * mismatch[n];
    if (!std::isfinite(nT[last]))
      throw DivergenceError("adjoint sweep produced a non-finite multiplier", n);
    std::swap(lT, nT);
    if (keep_full) {
      std::swap(ls, ns);
      std::swap(ll, nl);
    }
  }
  return res;
}

TimeSeries gradient_drier(const AdjointTrajectory& adjoint, const ScalarField& gain) {
  const auto& g = adjoint.grid;
  if (gain.size() != g.n_nodes())
    throw ConfigError("gain profile does not match the adjoint grid");
  const auto nn = static_cast<std::size_t>(g.n_nodes());
  TimeSeries d(g);
  std::vector<double> prod(nn);
  for (int n = 0; n < g.n_samples(); ++n) {
    const std::size_t off = nn * static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < nn; ++i)
      prod[i] = adjoint.psi_T[off + i] * gain[static_cast<int>(i)];
    d[n] = trapezoid(prod, g.dx());
  }
  return d;
}

TimeSeries gradient_drier(const AdjointTrajectory& adjoint, TrajectorySource& forward, const DrierParams& p) {
  const auto& g = adjoint.grid;
  if (!forward.grid().same_layout(g))
    throw ConfigError("forward trajectory does not match the adjoint grid");
  const auto nn = static_cast<std::size_t>(g.n_nodes());
  std::vector<double> es(nn), el(nn), te(nn), prod(nn);
  TimeSeries d(g);
  for (int n = 0; n < g.n_samples(); ++n) {
    forward.read_slice(n, es, el, te);
    const std::size_t off = nn * static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < nn; ++i)
      prod[i] = adjoint.psi_T[off + i] * heat_input_gain({es[i], el[i], te[i]}, p);
    d[n] = trapezoid(prod, g.dx());
  }
  return d;
}

} // namespace dryctl
