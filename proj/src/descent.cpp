#include "dryctl/descent.hpp"

#include "dryctl/csv.hpp"

#include <chrono>
#include <cmath>

namespace dryctl {

int DescentTrace::increases() const {
  int k = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    k += rows[i].J > rows[i - 1].J;
  return k;
}

void DescentTrace::write_csv(const std::string& path) const {
  CsvWriter w(path, {"iter", "J", "alpha", "grad_norm", "wall_ms"});
  for (const auto& r : rows)
    w.row({static_cast<double>(r.iter), r.J, r.alpha, r.grad_norm, r.wall_ms});
  w.close();
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
  case StopReason::GradientTolerance:
    return "gradient_tolerance";
  case StopReason::CostTolerance:
    return "cost_tolerance";
  case StopReason::MaxIterations:
    return "max_iterations";
  case StopReason::Interrupted:
    return "interrupted";
  }
  return "unknown";
}

double l2_norm(std::span<const double> v, double dt) {
  const auto w = trapezoid_weights(static_cast<int>(v.size()), dt);
  return std::sqrt(weighted_dot(w, v, v));
}

namespace {

/// q = theta^2 / 2 on top of another problem.
class SquaredProblem final : public ControlProblem {
public:
  explicit SquaredProblem(ControlProblem& inner)
      : inner_(inner), q_(static_cast<std::size_t>(inner.grid().n_samples())), g_(q_.size()) {}

  const SpaceTimeGrid& grid() const override { return inner_.grid(); }
  ControlKind kind() const override { return ControlKind::SquaredParametrization; }

  double cost(std::span<const double> theta) override {
    map(theta);
    return inner_.cost(q_);
  }
  double cost_and_gradient(std::span<const double> theta, std::span<double> grad) override {
    map(theta);
    const double J = inner_.cost_and_gradient(q_, g_);
    for (std::size_t n = 0; n < grad.size(); ++n)
      grad[n] = theta[n] * g_[n];
    return J;
  }

private:
  void map(std::span<const double> theta) {
    for (std::size_t n = 0; n < q_.size(); ++n)
      q_[n] = 0.5 * theta[n] * theta[n];
  }

  ControlProblem& inner_;
  std::vector<double> q_, g_;
};

DescentResult run_bb(ControlProblem& problem, std::vector<double> x, const DescentOptions& opt) {
  using clock = std::chrono::steady_clock;
  const auto& grid = problem.grid();
  const auto m = static_cast<std::size_t>(grid.n_samples());
  if (x.size() != m)
    throw ConfigError("initial control is not sampled on the problem's time grid");
  if (opt.max_iters < 1)
    throw ConfigError("max_iters must be at least 1");
  const auto w = trapezoid_weights(static_cast<int>(m), grid.dt());
  const double tol_cost = opt.tol_cost >= 0.0 ? opt.tol_cost : 1e-10 * opt.cost_scale;

  DescentResult res;
  std::vector<double> g(m), x_prev, g_prev, best;
  double best_J = 0.0;
  double g0_norm = 0.0;
  double alpha = 0.0;
  const auto start = clock::now();

  for (int k = 0;; ++k) {
    const double J = problem.cost_and_gradient(x, g);
    const double gn = std::sqrt(weighted_dot(w, g, g));
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    res.trace.rows.push_back({k, J, alpha, gn, ms});
    if (!std::isfinite(J) || !std::isfinite(gn))
      throw DescentDiverged("descent produced a non-finite cost", k, res.trace);

    if (k == 0) {
      res.initial_cost = J;
      g0_norm = gn;
    }
    if (k == 0 || J < best_J) {
      best_J = J;
      best = x;
      res.best_iter = k;
    }

    if (J <= tol_cost) {
      res.reason = StopReason::CostTolerance;
      break;
    }
    if (gn <= opt.tol_grad * g0_norm || gn == 0.0) {
      res.reason = StopReason::GradientTolerance;
      break;
    }
    if (opt.progress && !opt.progress(k, J)) {
      res.reason = StopReason::Interrupted;
      break;
    }
    if (k >= opt.max_iters) {
      res.reason = StopReason::MaxIterations;
      break;
    }

    // Step size.
    const double x_norm = std::sqrt(weighted_dot(w, x, x));
    const double fixed = x_norm > 0.0 ? opt.lambda0 * x_norm / gn : opt.lambda0 * J / (gn * gn);
    if (k == 0) {
      alpha = fixed;
    } else {
      double dd = 0.0, dy = 0.0;
      for (std::size_t n = 0; n < m; ++n) {
        const double d = x[n] - x_prev[n];
        const double y = g[n] - g_prev[n];
        dd += w[n] * d * d;
        dy += w[n] * d * y;
      }
      if (dy > 0.0 && std::isfinite(dd / dy)) {
        alpha = dd / dy;
      } else {
        alpha = fixed;
        ++res.fallback_steps;
        res.warnings.push_back("iteration " + std::to_string(k) +
                               ": non-positive secant curvature, fixed step used");
      }
    }
    x_prev = x;
    g_prev = g;
    for (std::size_t n = 0; n < m; ++n)
      x[n] -= alpha * g[n];
  }

  res.final_cost = best_J;
  res.control = {TimeSeries(grid, std::move(best)), problem.kind()};
  return res;
}

} // namespace

DescentResult bb_descent(ControlProblem& problem, const ControlSignal& q0, const DescentOptions& options) {
  if (!q0.grid().same_time(problem.grid()))
    throw ConfigError("initial control is not sampled on the problem's time grid");
  std::vector<double> x(q0.values.values().begin(), q0.values.values().end());
  return run_bb(problem, std::move(x), options);
}

DescentResult bb_descent_nonneg(ControlProblem& problem, std::span<const double> theta0,
                                const DescentOptions& options) {
  SquaredProblem sq(problem);
  DescentResult res = run_bb(sq, std::vector<double>(theta0.begin(), theta0.end()), options);
  res.theta.assign(res.control.values.values().begin(), res.control.values.values().end());
  for (int n = 0; n < res.control.values.size(); ++n)
    res.control.values[n] = 0.5 * res.theta[static_cast<std::size_t>(n)] * res.theta[static_cast<std::size_t>(n)];
  res.control.kind = problem.kind();
  return res;
}

} // namespace dryctl
