#pragma once

// Reference values computed independently of the library: closed forms
// evaluated directly, with no shared code paths.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Outlet of T_t + u T_x = k (q - T) with constant q, constant initial
/// profile T_init and inlet T_in(t). Exact characteristic solution.
inline double simple_outlet_constant_q(double u, double k, double length, double T_init, double q,
                                       const std::function<double(double)>& T_in, double t) {
  const double t0 = length / u;
  if (t < t0)
    return T_init * std::exp(-k * t) + q * (1.0 - std::exp(-k * t));
  return T_in(t - t0) * std::exp(-k * t0) + q * (1.0 - std::exp(-k * t0));
}

/// Set-point control holding the outlet at T_star for a constant initial
/// profile equal to T_star, from F = T_star - T_in(t - t0) e^{-k t0} where F
/// is the control's contribution along the characteristic:
///   q(t) = T_star                                          t < t0
///   q(t) = T_star - e0 (T_in(s) + T_in'(s)/k) + e0 q(s)    s = t - t0 >= 0
/// Evaluated by unrolling the delay exactly (no interpolation).
inline double setpoint_control(double u, double k, double length, double T_star,
                               const std::function<double(double)>& T_in,
                               const std::function<double(double)>& dT_in, double t) {
  const double t0 = length / u;
  const double e0 = std::exp(-k * t0);
  if (t < t0)
    return T_star;
  const double s = t - t0;
  return T_star - e0 * (T_in(s) + dT_in(s) / k) + e0 * setpoint_control(u, k, length, T_star, T_in, dT_in, s);
}

/// Liquid density at equilibrium: relaxation towards X* eps_s at rate k_f
/// along the conveyor.
inline double equilibrium_liquid(double eps_s0, double eps_l0, double X_star, double k_f, double u, double x) {
  const double e = std::exp(-k_f * x / u);
  return eps_l0 * e + eps_s0 * X_star * (1.0 - e);
}

/// Moisture at the outlet on a dry basis.
inline double equilibrium_outlet_moisture(double X0, double X_star, double k_f, double u, double length) {
  return X_star + (X0 - X_star) * std::exp(-k_f * length / u);
}

/// Naive O(M^2) DFT power: |X_k|^2 / M^2, doubled for paired bins.
inline std::vector<double> dft_power(const std::vector<double>& x) {
  const std::size_t M = x.size();
  std::vector<double> p(M / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::complex<double> s{};
    for (std::size_t n = 0; n < M; ++n)
      s += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * n) / static_cast<double>(M));
    const double a = std::norm(s) / static_cast<double>(M * M);
    p[k] = (k == 0 || (M % 2 == 0 && k == M / 2)) ? a : 2.0 * a;
  }
  return p;
}

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]);
    my += std::log(err[i]);
  }
  mx /= static_cast<double>(h.size());
  my /= static_cast<double>(h.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sxy += (std::log(h[i]) - mx) * (std::log(err[i]) - my);
    sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
  }
  return sxy / sxx;
}

} // namespace oracle
