#include "dryctl/errors.hpp"
#include "dryctl/grid.hpp"
#include "dryctl/signals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"

using namespace dryctl;

TEST(Grid, FromHorizonAdjustsStep) {
  const auto g = SpaceTimeGrid::from_horizon(5.0, 200, 1e-3, 10.0);
  EXPECT_EQ(g.n_steps(), 10000);
  EXPECT_EQ(g.n_nodes(), 201);
  EXPECT_DOUBLE_EQ(g.dx(), 0.025);
  EXPECT_NEAR(g.t(g.n_steps()), 10.0, 1e-12);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(SpaceTimeGrid::uniform(5.0, 0, 1e-3, 10), ConfigError);
  EXPECT_THROW(SpaceTimeGrid::uniform(-1.0, 10, 1e-3, 10), ConfigError);
  EXPECT_THROW(SpaceTimeGrid::uniform(1.0, 10, 0.0, 10), ConfigError);
}

TEST(Grid, CflViolationNamesTheNumbers) {
  auto g = SpaceTimeGrid::from_horizon(1.0, 100, 0.02, 1.0);
  try {
    g.validate_cfl(1.0);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("u0"), std::string::npos);
    EXPECT_NE(msg.find("dt"), std::string::npos);
    EXPECT_NE(msg.find("dx"), std::string::npos);
  }
  EXPECT_FALSE(g.cfl_admissible());
  g.validate_cfl(0.4);
  EXPECT_TRUE(g.cfl_admissible());
}

TEST(Stencil, ExactOnQuadratics) {
  const auto g = SpaceTimeGrid::uniform(2.0, 40, 1e-3, 10);
  ScalarField f(g);
  for (int i = 0; i < g.n_nodes(); ++i)
    f[i] = 3.0 - 2.0 * g.x(i) + 0.7 * g.x(i) * g.x(i);
  const ScalarField d = upwind_derivative(f);
  EXPECT_EQ(d[0], 0.0);
  // Node 1 is first order: exact for the linear part only.
  EXPECT_NEAR(d[1], -2.0 + 0.7 * (g.x(1) + g.x(0)), 1e-12);
  for (int i = 2; i < g.n_nodes(); ++i)
    EXPECT_NEAR(d[i], -2.0 + 1.4 * g.x(i), 1e-11) << i;
}

TEST(Stencil, TransposeMatchesInnerProducts) {
  const auto g = SpaceTimeGrid::uniform(1.0, 25, 1e-3, 10);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> f(26), lam(26), Df(26), DTl(26);
  for (int trial = 0; trial < 5; ++trial) {
    for (auto& v : f)
      v = nd(rng);
    for (auto& v : lam)
      v = nd(rng);
    f[0] = 0.0; // the inlet value is prescribed, not a degree of freedom
    upwind_derivative(f, g.dx(), Df);
    upwind_derivative_transpose(lam, g.dx(), DTl);
    double lhs = 0, rhs = 0;
    for (int i = 1; i <= 25; ++i) {
      lhs += lam[i] * Df[i];
      rhs += f[i] * DTl[i];
    }
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs) + 1e-12);
    EXPECT_EQ(DTl[0], 0.0);
  }
}

TEST(Stencil, AdvectKeepsInletAndChecksCfl) {
  const auto g = SpaceTimeGrid::uniform(1.0, 10, 0.05, 10);
  ScalarField f(g, 1.0);
  f[0] = 5.0;
  const ScalarField next = upwind_advect(f, 1.0, 0.05);
  EXPECT_EQ(next[0], 5.0);
  EXPECT_THROW(upwind_advect(f, 1.0, 0.2), ConfigError);
}

// Smooth pulse advected with dt ~ dx^2 so the time error is negligible:
// the second-order spatial stencil must show order close to two.
TEST(Stencil, GaussianPulseConvergesAtSecondOrder) {
  const double u = 1.0, L = 1.0, T = 0.3;
  const auto pulse = [](double x) { return std::exp(-std::pow((x - 0.3) / 0.06, 2)); };
  std::vector<double> h, err;
  for (int N : {100, 200, 400}) {
    const double dx = L / N;
    const double dt = 20.0 * dx * dx;
    const int steps = static_cast<int>(std::lround(T / dt));
    const auto g = SpaceTimeGrid::uniform(L, N, T / steps, steps);
    ScalarField f(g);
    for (int i = 0; i < g.n_nodes(); ++i)
      f[i] = pulse(g.x(i));
    for (int n = 0; n < steps; ++n)
      f = upwind_advect(f, u, g.dt());
    double e = 0;
    for (int i = 0; i < g.n_nodes(); ++i)
      e = std::max(e, std::abs(f[i] - pulse(g.x(i) - u * T)));
    h.push_back(dx);
    err.push_back(e);
  }
  EXPECT_GE(oracle::loglog_slope(h, err), 1.8);
}

TEST(Quadrature, TrapezoidExactForLinear) {
  std::vector<double> f(11);
  for (int i = 0; i <= 10; ++i)
    f[i] = 2.0 + 3.0 * 0.1 * i;
  EXPECT_NEAR(trapezoid(f, 0.1), 2.0 + 1.5, 1e-14);
  const auto w = trapezoid_weights(11, 0.1);
  double s = 0;
  for (double v : w)
    s += v;
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(w.front(), 0.05);
  EXPECT_DOUBLE_EQ(w[5], 0.1);
}

TEST(Signals, WaveformAndSampled) {
  const Waveform w = Waveform::sinusoid(100.0, 10.0, 1.0);
  EXPECT_NEAR(w.value(0.25), 110.0, 1e-12);
  EXPECT_NEAR(w.derivative(0.0), 20.0 * std::numbers::pi, 1e-12);
  EXPECT_THROW(Waveform::sinusoid(0, 1, 0.0), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "dryctl_sampled.csv";
  {
    std::ofstream out(path);
    out << "t,value\n0,1\n1,3\n2,2\n";
  }
  const Signal s(SampledSignal::from_csv(path.string()));
  EXPECT_DOUBLE_EQ(s.value(0.5), 2.0);
  EXPECT_DOUBLE_EQ(s.value(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(s.value(5.0), 2.0);
  EXPECT_THROW(s.derivative(0.5), UnsupportedCase);
  {
    std::ofstream out(path);
    out << "0,1\n0,2\n";
  }
  EXPECT_THROW(SampledSignal::from_csv(path.string()), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(SampledSignal::from_csv(path.string()), IoError);
}
