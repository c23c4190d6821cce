#include "dryctl/scenario.hpp"

#include "dryctl/control_problems.hpp"
#include "dryctl/csv.hpp"
#include "dryctl/errors.hpp"
#include "dryctl/linear_stability.hpp"
#include "dryctl/presets.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace dryctl {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::array kKindNames{
    std::pair{ScenarioKind::SimpleValidate, "simple-validate"},
    std::pair{ScenarioKind::SimpleControl, "simple-control"},
    std::pair{ScenarioKind::DrierEquilibrium, "drier-equilibrium"},
    std::pair{ScenarioKind::DrierLinearControl, "drier-linear-control"},
    std::pair{ScenarioKind::DrierNonlinearControl, "drier-nonlinear-control"},
    std::pair{ScenarioKind::DrierConstrainedControl, "drier-constrained-control"},
    std::pair{ScenarioKind::Spectrum, "spectrum"},
};

bool is_simple(ScenarioKind k) { return k == ScenarioKind::SimpleValidate || k == ScenarioKind::SimpleControl; }

bool is_drier(ScenarioKind k) {
  return k == ScenarioKind::DrierEquilibrium || k == ScenarioKind::DrierLinearControl ||
         k == ScenarioKind::DrierNonlinearControl || k == ScenarioKind::DrierConstrainedControl;
}

bool is_nonlinear(ScenarioKind k) {
  return k == ScenarioKind::DrierNonlinearControl || k == ScenarioKind::DrierConstrainedControl;
}

// ---- reading --------------------------------------------------------------

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

class Reader {
public:
  Reader(UnitConverter& units, std::string base_dir) : units_(units), base_dir_(std::move(base_dir)) {}

  double quantity(const json& obj, const std::string& where, const char* key, Dimension dim) {
    const std::string field = where + "." + key;
    const json& v = obj.at(key);
    if (v.is_number()) {
      if (dim != Dimension::Dimensionless)
        throw ConfigError(field + ": needs an explicit unit, e.g. \"" + std::to_string(v.get<double>()) + " " +
                          units_.target_unit(dim) + "\"");
      return v.get<double>();
    }
    if (!v.is_string())
      throw ConfigError(field + ": expected a quantity string");
    return units_.convert(field, v.get<std::string>(), dim);
  }

  double quantity_or(const json& obj, const std::string& where, const char* key, Dimension dim, double fallback) {
    return obj.contains(key) ? quantity(obj, where, key, dim) : fallback;
  }

  SignalSpec signal(const json& obj, const std::string& where, Dimension dim) {
    check_keys(obj, where, {"type", "value", "mean", "amplitude", "period", "phase", "path"});
    const std::string type = obj.value("type", "constant");
    SignalSpec s;
    if (type == "constant") {
      s.type = SignalSpec::Type::Constant;
      s.mean = quantity(obj, where, "value", dim);
    } else if (type == "sinusoid") {
      s.type = SignalSpec::Type::Sinusoid;
      s.mean = quantity_or(obj, where, "mean", dim, 0.0);
      s.amplitude = quantity(obj, where, "amplitude", dim);
      s.period = quantity(obj, where, "period", Dimension::Time);
      s.phase = quantity_or(obj, where, "phase", Dimension::Dimensionless, 0.0);
      if (!(s.period > 0.0))
        throw ConfigError(where + ".period must be positive");
    } else if (type == "file") {
      s.type = SignalSpec::Type::File;
      fs::path p = obj.at("path").get<std::string>();
      if (p.is_relative())
        p = fs::path(base_dir_) / p;
      s.path = p.lexically_normal().string();
      if (!fs::exists(s.path))
        throw ConfigError(where + ".path: file '" + s.path + "' does not exist");
    } else {
      throw ConfigError(where + ".type: unknown signal type '" + type + "' (constant, sinusoid or file)");
    }
    return s;
  }

private:
  UnitConverter& units_;
  std::string base_dir_;
};

void read_simple_model(Reader& r, const json& m, ScenarioConfig& c) {
  check_keys(m, "model", {"preset", "u0", "k", "length", "T_star", "T_init"});
  SimpleModelParams p = reference_simple_params();
  if (m.value("preset", "reference") != "reference")
    throw ConfigError("model.preset: only 'reference' is known");
  // Reference values are in minutes; rescale when the scenario runs in seconds.
  const double f = 1.0 / seconds_per(c.time_unit) * 60.0;
  p.u0 = r.quantity_or(m, "model", "u0", Dimension::Velocity, p.u0 / f);
  p.k = r.quantity_or(m, "model", "k", Dimension::Rate, p.k / f);
  p.length = r.quantity_or(m, "model", "length", Dimension::Length, p.length);
  p.T_star = r.quantity_or(m, "model", "T_star", Dimension::Temperature, p.T_star);
  c.simple_initial = r.quantity_or(m, "model", "T_init", Dimension::Temperature, p.T_star);
  p.T_init = Waveform::constant(c.simple_initial);
  c.simple = p;
}

void read_drier_model(Reader& r, const json& m, ScenarioConfig& c) {
  check_keys(m, "model", {"preset", "u0", "length", "k_f", "X_star", "c_ps", "c_pl", "h_l", "T_ref", "power", "area",
                          "T0", "k_cond", "inlet", "clamp_condensation"});
  if (m.value("preset", "reference") != "reference")
    throw ConfigError("model.preset: only 'reference' is known");
  DrierParams p = reference_drier_params(c.time_unit);
  p.u0 = r.quantity_or(m, "model", "u0", Dimension::Velocity, p.u0);
  p.length = r.quantity_or(m, "model", "length", Dimension::Length, p.length);
  p.k_f = r.quantity_or(m, "model", "k_f", Dimension::Rate, p.k_f);
  p.X_star = r.quantity_or(m, "model", "X_star", Dimension::Dimensionless, p.X_star);
  p.c_ps = r.quantity_or(m, "model", "c_ps", Dimension::SpecificHeat, p.c_ps);
  p.c_pl = r.quantity_or(m, "model", "c_pl", Dimension::SpecificHeat, p.c_pl);
  p.h_l = r.quantity_or(m, "model", "h_l", Dimension::LatentHeat, p.h_l);
  p.T_ref = r.quantity_or(m, "model", "T_ref", Dimension::Temperature, p.T_ref);
  p.power = r.quantity_or(m, "model", "power", Dimension::Power, p.power);
  p.area = r.quantity_or(m, "model", "area", Dimension::Area, p.area);
  p.T0 = r.quantity_or(m, "model", "T0", Dimension::Temperature, p.T0);
  p.k_cond = r.quantity_or(m, "model", "k_cond", Dimension::Conductivity, p.k_cond);
  p.clamp_condensation = m.value("clamp_condensation", false);
  if (m.contains("inlet")) {
    const json& in = m.at("inlet");
    check_keys(in, "model.inlet", {"mass_flow", "liquid_fraction", "eps_s0", "eps_l0"});
    if (in.contains("mass_flow")) {
      if (in.contains("eps_s0") || in.contains("eps_l0"))
        throw ConfigError("model.inlet: give either mass_flow/liquid_fraction or eps_s0/eps_l0");
      p.set_inlet_from_mass_flow(r.quantity(in, "model.inlet", "mass_flow", Dimension::MassFlow),
                                 r.quantity(in, "model.inlet", "liquid_fraction", Dimension::Dimensionless));
    } else {
      p.eps_s0 = r.quantity(in, "model.inlet", "eps_s0", Dimension::Density);
      p.eps_l0 = r.quantity(in, "model.inlet", "eps_l0", Dimension::Density);
    }
  }
  c.drier = p;
}

// ---- writing --------------------------------------------------------------

std::string q(double v, const UnitConverter& u, Dimension d) { return format_double(v) + " " + u.target_unit(d); }

json signal_json(const SignalSpec& s, const UnitConverter& u, Dimension d) {
  switch (s.type) {
  case SignalSpec::Type::Constant:
    return {{"type", "constant"}, {"value", q(s.mean, u, d)}};
  case SignalSpec::Type::Sinusoid:
    return {{"type", "sinusoid"},
            {"mean", q(s.mean, u, d)},
            {"amplitude", q(s.amplitude, u, d)},
            {"period", q(s.period, u, Dimension::Time)},
            {"phase", s.phase}};
  case SignalSpec::Type::File:
    return {{"type", "file"}, {"path", fs::absolute(s.path).lexically_normal().string()}};
  }
  return {};
}

std::vector<double> sample(const Signal& s, const SpaceTimeGrid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.n_samples()));
  for (int n = 0; n < g.n_samples(); ++n)
    v[static_cast<std::size_t>(n)] = s.value(g.t(n));
  return v;
}

std::vector<double> times(const SpaceTimeGrid& g) {
  std::vector<double> t(static_cast<std::size_t>(g.n_samples()));
  for (int n = 0; n < g.n_samples(); ++n)
    t[static_cast<std::size_t>(n)] = g.t(n);
  return t;
}

std::vector<double> nodes(const SpaceTimeGrid& g) {
  std::vector<double> x(static_cast<std::size_t>(g.n_nodes()));
  for (int i = 0; i < g.n_nodes(); ++i)
    x[static_cast<std::size_t>(i)] = g.x(i);
  return x;
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

/// RMS of (v - ref) over samples with t >= t_from.
double tail_rms(std::span<const double> v, double ref, const SpaceTimeGrid& g, double t_from) {
  double s = 0.0;
  int n_used = 0;
  for (int n = 0; n < g.n_samples(); ++n) {
    if (g.t(n) + 1e-9 * g.dt() < t_from)
      continue;
    const double d = v[static_cast<std::size_t>(n)] - ref;
    s += d * d;
    ++n_used;
  }
  return n_used ? std::sqrt(s / n_used) : 0.0;
}

// ---- the run --------------------------------------------------------------

class Runner {
public:
  Runner(const ScenarioConfig& c, const RunOptions& o, std::string out_dir)
      : c_(c), o_(o), out_dir_(std::move(out_dir)) {
    summary_["schema_version"] = kSummarySchemaVersion;
    summary_["name"] = c.name;
    summary_["kind"] = std::string(to_string(c.kind));
    summary_["time_unit"] = std::string(to_string(c.time_unit));
    summary_["metrics"] = json::object();
    summary_["warnings"] = json::array();
  }

  void run() {
    log("start " + std::string(to_string(c_.kind)));
    switch (c_.kind) {
    case ScenarioKind::SimpleValidate: simple_validate(); break;
    case ScenarioKind::SimpleControl: simple_control(); break;
    case ScenarioKind::DrierEquilibrium: drier_equilibrium(); break;
    case ScenarioKind::DrierLinearControl: drier_linear(); break;
    case ScenarioKind::DrierNonlinearControl:
    case ScenarioKind::DrierConstrainedControl: drier_nonlinear(); break;
    case ScenarioKind::Spectrum: spectrum_only(); break;
    }
    log("done");
  }

  json& summary() { return summary_; }
  ResultBundle& bundle() { return bundle_; }

private:
  void metric(const char* name, double v) { summary_["metrics"][name] = std::isfinite(v) ? json(v) : json(nullptr); }
  void warn(const std::string& w) { summary_["warnings"].push_back(w); }
  void log(const std::string& line) const {
    if (!o_.quiet && o_.log)
      o_.log("[" + c_.name + "] " + line);
  }

  DescentOptions descent_options(double cost_scale) const {
    DescentOptions d;
    d.max_iters = o_.max_iters.value_or(c_.optimizer.max_iters);
    d.tol_grad = c_.optimizer.tol_grad;
    d.tol_cost = c_.optimizer.tol_cost.value_or(-1.0);
    d.cost_scale = cost_scale;
    d.lambda0 = c_.optimizer.lambda0;
    d.progress = [this, every = std::max(1, d.max_iters / 10)](int it, double J) {
      if (it % every == 0)
        log("iter " + std::to_string(it) + "  J = " + format_double(J));
      return true;
    };
    return d;
  }

  void record_descent(const DescentResult& r) {
    metric("initial_cost", r.initial_cost);
    metric("final_cost", r.final_cost);
    metric("iterations", static_cast<double>(r.trace.size() ? r.trace.rows.back().iter : 0));
    metric("best_iteration", r.best_iter);
    metric("cost_increases", r.trace.increases());
    metric("fallback_steps", r.fallback_steps);
    summary_["stop_reason"] = std::string(to_string(r.reason));
    for (const auto& w : r.warnings)
      warn(w);
    add_trace(r.trace);
  }

  void add_trace(const DescentTrace& tr) {
    ResultTable t{"trace", {"iter", "J", "alpha", "grad_norm", "wall_ms"}, std::vector<std::vector<double>>(5)};
    for (const auto& row : tr.rows) {
      t.columns[0].push_back(row.iter);
      t.columns[1].push_back(row.J);
      t.columns[2].push_back(row.alpha);
      t.columns[3].push_back(row.grad_norm);
      t.columns[4].push_back(row.wall_ms);
    }
    bundle_.add(std::move(t));
  }

  void add_spectrum(std::span<const double> signal, const SpaceTimeGrid& g) {
    if (!c_.spectrum.enabled)
      return;
    if (g.n_steps() < 16) {
      warn("spectrum skipped: fewer than 16 time steps");
      return;
    }
    SpectrumOptions so;
    so.exclude_dc = c_.spectrum.exclude_dc;
    so.hann_window = c_.spectrum.hann_window;
    so.peak_threshold = c_.spectrum.peak_threshold;
    const SpectrumResult s = power_spectrum(signal, g.dt(), so);
    const double to_per_s = 1.0 / seconds_per(c_.time_unit);
    std::vector<double> om(s.omega);
    for (auto& w : om)
      w *= to_per_s;
    bundle_.add({"spectrum", {"omega_rad_per_s", "normalized_power"}, {om, s.normalized_power}});
    json peaks = json::array();
    for (const auto& p : s.peaks)
      peaks.push_back({{"omega_rad_per_s", p.omega * to_per_s}, {"power", p.power}, {"bin", p.bin}});
    summary_["peaks"] = peaks;
    metric("spectral_resolution_rad_per_s", s.resolution * to_per_s);
    if (s.beat) {
      summary_["beat"] = {{"omega1_rad_per_s", s.beat->omega1 * to_per_s},
                          {"omega2_rad_per_s", s.beat->omega2 * to_per_s},
                          {"period_s", s.beat->period * seconds_per(c_.time_unit)}};
      metric("beat_period_s", s.beat->period * seconds_per(c_.time_unit));
    } else {
      summary_["beat"] = nullptr;
    }
  }

  SimpleModelParams simple_params() const {
    SimpleModelParams p = c_.simple;
    p.T_inlet = c_.simple_inlet.to_signal();
    return p;
  }

  void simple_validate() {
    const SimpleModelParams p = simple_params();
    const SpaceTimeGrid g = c_.make_grid();
    const Signal qs = c_.simple_control.to_signal();
    const ControlSignal q{TimeSeries(g, sample(qs, g)), ControlKind::SurroundingsTemperature};

    const SimpleTrajectory tr = solve_forward(p, q, g, false);
    const AnalyticSolution exact(p, q);
    std::vector<double> ref(static_cast<std::size_t>(g.n_samples())), prof_exact(static_cast<std::size_t>(g.n_nodes()));
    double max_err = 0.0;
    for (int n = 0; n < g.n_samples(); ++n) {
      ref[static_cast<std::size_t>(n)] = exact(p.length, g.t(n));
      max_err = std::max(max_err, std::abs(tr.outlet[n] - ref[static_cast<std::size_t>(n)]));
    }
    for (int i = 0; i < g.n_nodes(); ++i)
      prof_exact[static_cast<std::size_t>(i)] = exact(g.x(i), g.horizon());
    metric("max_outlet_error", max_err);
    bundle_.add({"outlet", {"t", "T_numeric", "T_analytic"}, {times(g), to_vector(tr.outlet.values()), ref}});
    bundle_.add({"profiles",
                 {"x", "T_numeric", "T_analytic"},
                 {nodes(g), to_vector(tr.final_profile.values()), prof_exact}});

    // Convergence study on the outlet error.
    const double dt = c_.convergence_dt.value_or(c_.grid.dt);
    std::vector<double> lx, ly, cn, cdx, cerr;
    for (int N : c_.convergence_levels) {
      SpaceTimeGrid gl = SpaceTimeGrid::from_horizon(p.length, N, dt, c_.grid.horizon);
      gl.validate_cfl(p.u0);
      const ControlSignal ql{TimeSeries(gl, sample(qs, gl)), q.kind};
      std::vector<double> out(static_cast<std::size_t>(gl.n_samples()));
      simulate_outlet(p, ql.values.values(), gl, out);
      const AnalyticSolution ex(p, ql);
      double e = 0.0;
      for (int n = 0; n < gl.n_samples(); ++n)
        e = std::max(e, std::abs(out[static_cast<std::size_t>(n)] - ex(p.length, gl.t(n))));
      log("N = " + std::to_string(N) + "  max outlet error " + format_double(e));
      cn.push_back(N);
      cdx.push_back(gl.dx());
      cerr.push_back(e);
      lx.push_back(std::log(gl.dx()));
      ly.push_back(std::log(e));
    }
    if (lx.size() >= 2) {
      const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
      const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
      }
      metric("convergence_order", sxy / sxx);
      bundle_.add({"convergence", {"n_cells", "dx", "max_outlet_error"}, {cn, cdx, cerr}});
    }
  }

  void simple_control() {
    const SimpleModelParams p = simple_params();
    const SpaceTimeGrid g = c_.make_grid();
    SimpleControlProblem prob(p, g);
    const ControlSignal q0{TimeSeries(g, sample(c_.simple_control.to_signal(), g)), ControlKind::SurroundingsTemperature};
    const DescentResult r = bb_descent(prob, q0, descent_options(p.T_star * p.T_star * g.horizon()));
    record_descent(r);

    std::vector<double> qa(static_cast<std::size_t>(g.n_samples()), std::nan(""));
    try {
      const AnalyticControl ac = analytic_optimal_control(p, g);
      qa = to_vector(ac.control.values.values());
      metric("jump_time", ac.jump.t0);
      metric("jump_before", ac.jump.before);
      metric("jump_after", ac.jump.after);
      double out_w = 0.0, in_w = 0.0;
      for (int n = 0; n < g.n_samples(); ++n) {
        const double d = std::abs(r.control[n] - qa[static_cast<std::size_t>(n)]);
        if (std::abs(g.t(n) - ac.jump.t0) <= c_.jump_window)
          in_w = std::max(in_w, d);
        else if (n < g.n_steps())
          out_w = std::max(out_w, d);
      }
      metric("control_discrepancy_outside_window", out_w);
      metric("control_discrepancy_inside_window", in_w);
      // The last sample never influences the outlet inside the horizon.
      metric("control_discrepancy_final_sample", std::abs(r.control[g.n_steps()] - qa.back()));
    } catch (const UnsupportedCase& e) {
      warn(std::string("analytic control unavailable: ") + e.what());
    }

    std::vector<double> controlled(static_cast<std::size_t>(g.n_samples())), free(controlled.size());
    simulate_outlet(p, r.control.values.values(), g, controlled);
    simulate_outlet(p, std::vector<double>(controlled.size(), p.T_star), g, free);
    metric("outlet_rms_deviation", tail_rms(controlled, p.T_star, g, 0.0));
    bundle_.add({"control", {"t", "q_numeric", "q_analytic"}, {times(g), to_vector(r.control.values.values()), qa}});
    bundle_.add({"outlet", {"t", "T_controlled", "T_constant_control"}, {times(g), controlled, free}});
  }

  void drier_equilibrium() {
    const DrierParams& p = c_.drier;
    const SpaceTimeGrid g = c_.make_grid();
    const EquilibriumProfile eq = solve_equilibrium(p, g);
    const int N = g.n_cells();
    std::vector<double> X(static_cast<std::size_t>(g.n_nodes()));
    for (int i = 0; i < g.n_nodes(); ++i)
      X[static_cast<std::size_t>(i)] = eq.eps_l[i] / eq.eps_s;
    const ScalarField lam = positive_eigenvalue_profile(eq, p);
    const EigenvalueIntegral ei = positive_eigenvalue_integral(eq, p, p.length);
    metric("eps_s", eq.eps_s);
    metric("outlet_moisture", eq.outlet_moisture());
    metric("outlet_moisture_relative_error", std::abs(eq.outlet_moisture() - p.X_star) / p.X_star);
    metric("outlet_temperature", eq.T[N]);
    metric("inlet_temperature", eq.T[0]);
    metric("peclet", peclet_number(p));
    metric("eigenvalue_integral", ei.value);
    metric("growth_factor", ei.growth_factor);
    metric("heat_source_density", heat_source_density(p));
    bundle_.add({"profiles",
                 {"x", "eps_w", "X", "T", "lambda_plus"},
                 {nodes(g), to_vector(eq.eps_l.values()), X, to_vector(eq.T.values()), to_vector(lam.values())}});
  }

  double window_start(const SpaceTimeGrid& g) const {
    return g.horizon() - (c_.final_window > 0.0 ? c_.final_window
                                                : std::min(3600.0 / seconds_per(c_.time_unit), g.horizon() / 2));
  }

  void drier_linear() {
    const DrierParams& p = c_.drier;
    const SpaceTimeGrid g = c_.make_grid();
    const EquilibriumProfile eq = solve_equilibrium(p, g);
    PerturbationInlet in{c_.inlet_eps_s.to_signal(), c_.inlet_eps_l.to_signal(), c_.inlet_T.to_signal()};
    const LinearDrierSystem sys(eq, p, in, g);
    LinearDrierControlProblem prob(sys);
    const DescentResult r =
        bb_descent(prob, ControlSignal::constant(g, 0.0, ControlKind::HeatDensityPerturbation), descent_options(0.0));
    record_descent(r);

    std::vector<double> free(static_cast<std::size_t>(g.n_samples())), controlled(free.size());
    sys.outlet_temperature(std::vector<double>(free.size(), 0.0), free);
    sys.outlet_temperature(r.control.values.values(), controlled);
    const double t_from = window_start(g);
    const double rms_free = tail_rms(free, 0.0, g, t_from);
    const double rms_ctl = tail_rms(controlled, 0.0, g, t_from);
    metric("residual", std::sqrt(2.0 * r.final_cost / g.horizon()));
    metric("window_start", t_from);
    metric("outlet_rms_uncontrolled", rms_free);
    metric("outlet_rms_controlled", rms_ctl);
    metric("outlet_reduction", rms_free > 0.0 ? 1.0 - rms_ctl / rms_free : 0.0);

    // Single-frequency temperature forcing also has a closed-form control.
    const auto flat = [](const SignalSpec& s) { return s.type == SignalSpec::Type::Constant && s.mean == 0.0; };
    if (c_.inlet_T.type == SignalSpec::Type::Sinusoid && flat(c_.inlet_eps_s) && flat(c_.inlet_eps_l)) {
      const double omega = 2.0 * std::numbers::pi / c_.inlet_T.period;
      InletAmplitudes a;
      a.T = c_.inlet_T.amplitude * std::complex<double>(std::sin(c_.inlet_T.phase), -std::cos(c_.inlet_T.phase));
      try {
        const auto qhat = frequency_domain_control(eq, p, omega, a);
        metric("harmonic_control_amplitude", std::abs(qhat));
      } catch (const NoControlExists& e) {
        warn(e.what());
      }
    }
    bundle_.add({"control", {"t", "dqdot"}, {times(g), to_vector(r.control.values.values())}});
    bundle_.add({"outlet", {"t", "dT_uncontrolled", "dT_controlled"}, {times(g), free, controlled}});
    add_spectrum(r.control.values.values(), g);
  }

  void drier_nonlinear() {
    const DrierParams& p = c_.drier;
    const SpaceTimeGrid g = c_.make_grid();
    const EquilibriumProfile eq = solve_equilibrium(p, g);
    DrierInlet in;
    if (c_.delta_alpha) {
      const double w = 2.0 * std::numbers::pi / c_.forcing_period;
      const double da = *c_.delta_alpha;
      in.eps_s = Waveform::constant(eq.eps_s);
      in.eps_l = Waveform{eq.eps_l[0], eq.eps_l[0] * da, w, 0.0};
      in.T = Waveform{eq.T[0], eq.T[0] * da, w, 0.0};
    } else {
      in = {c_.inlet_eps_s.to_signal(), c_.inlet_eps_l.to_signal(), c_.inlet_T.to_signal()};
    }
    const double T_star = c_.set_point.value_or(eq.T[g.n_cells()]);
    metric("set_point", T_star);
    const std::string dump = c_.dump_trajectory ? (fs::path(out_dir_) / "trajectory.bin").string() : std::string();
    if (!dump.empty())
      fs::create_directories(out_dir_);
    NonlinearDrierControlProblem prob(p, in, g, T_star, eq.to_state(),
                                      dump.empty() ? TrajectoryStorage::Memory : TrajectoryStorage::BinaryDump, dump);
    const double q0 = heat_source_density(p);
    const auto m = static_cast<std::size_t>(g.n_samples());
    const DescentOptions opt = descent_options(T_star * T_star * g.horizon());
    const DescentResult r = c_.kind == ScenarioKind::DrierConstrainedControl
                                ? bb_descent_nonneg(prob, std::vector<double>(m, std::sqrt(2.0 * q0)), opt)
                                : bb_descent(prob, ControlSignal::constant(g, q0, ControlKind::HeatDensity), opt);
    record_descent(r);
    if (!dump.empty())
      fs::remove(dump);

    const DrierTrajectory base = prob.simulate(std::vector<double>(m, q0));
    const DrierTrajectory ctl = prob.simulate(r.control.values.values());
    const double t_from = window_start(g);
    const double rms_free = tail_rms(base.outlet_T.values(), T_star, g, t_from);
    const double rms_ctl = tail_rms(ctl.outlet_T.values(), T_star, g, t_from);
    const auto qv = r.control.values.values();
    metric("baseline_cost", cost(base.outlet_T, T_star));
    metric("window_start", t_from);
    metric("outlet_rms_baseline", rms_free);
    metric("outlet_rms_controlled", rms_ctl);
    metric("outlet_reduction", rms_free > 0.0 ? 1.0 - rms_ctl / rms_free : 0.0);
    metric("min_control", *std::min_element(qv.begin(), qv.end()));
    metric("negative_control_samples",
           static_cast<double>(std::count_if(qv.begin(), qv.end(), [](double v) { return v < 0.0; })));
    metric("max_outlet_deviation", [&] {
      double d = 0.0;
      for (double v : ctl.outlet_T.values())
        d = std::max(d, std::abs(v - T_star));
      return d;
    }());

    std::vector<double> Xb(static_cast<std::size_t>(g.n_nodes())), Xc(Xb.size());
    for (int i = 0; i < g.n_nodes(); ++i) {
      Xb[static_cast<std::size_t>(i)] = base.final_state.eps_l[i] / base.final_state.eps_s[i];
      Xc[static_cast<std::size_t>(i)] = ctl.final_state.eps_l[i] / ctl.final_state.eps_s[i];
    }
    bundle_.add({"control", {"t", "qdot"}, {times(g), to_vector(qv)}});
    bundle_.add({"outlet",
                 {"t", "T_baseline", "T_controlled", "X_baseline", "X_controlled"},
                 {times(g), to_vector(base.outlet_T.values()), to_vector(ctl.outlet_T.values()),
                  to_vector(base.outlet_X.values()), to_vector(ctl.outlet_X.values())}});
    bundle_.add({"profiles",
                 {"x", "T_final_baseline", "T_final_controlled", "X_final_baseline", "X_final_controlled"},
                 {nodes(g), to_vector(base.final_state.T.values()), to_vector(ctl.final_state.T.values()), Xb, Xc}});
    add_spectrum(qv, g);
  }

  void spectrum_only() {
    const SpaceTimeGrid g = c_.make_grid();
    std::vector<double> v(static_cast<std::size_t>(g.n_samples()), 0.0);
    for (const auto& s : c_.signals) {
      const auto part = sample(s.to_signal(), g);
      for (std::size_t n = 0; n < v.size(); ++n)
        v[n] += part[n];
    }
    metric("mean_square", mean_square(std::span<const double>(v).first(v.size() - 1)));
    bundle_.add({"signal", {"t", "value"}, {times(g), v}});
    add_spectrum(v, g);
  }

  const ScenarioConfig& c_;
  const RunOptions& o_;
  std::string out_dir_;
  json summary_;
  ResultBundle bundle_;
};

} // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(ScenarioKind kind) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (k == kind)
      return name;
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames)
    if (text == name)
      return k;
  throw ConfigError("unknown scenario kind '" + std::string(text) + "'");
}

Signal SignalSpec::to_signal() const {
  switch (type) {
  case Type::Constant: return Waveform::constant(mean);
  case Type::Sinusoid: return Waveform{mean, amplitude, 2.0 * std::numbers::pi / period, phase};
  case Type::File: return SampledSignal::from_csv(path);
  }
  return {};
}

SpaceTimeGrid ScenarioConfig::make_grid() const {
  const double length = is_simple(kind) ? simple.length : is_drier(kind) ? drier.length : 1.0;
  SpaceTimeGrid g = SpaceTimeGrid::from_horizon(length, grid.n_cells, grid.dt, grid.horizon);
  if (is_simple(kind))
    g.validate_cfl(simple.u0);
  else if (is_drier(kind))
    g.validate_cfl(drier.u0);
  return g;
}

void ScenarioConfig::validate() const {
  if (name.empty())
    throw ConfigError("scenario needs a name");
  if (grid.n_cells < 2)
    throw ConfigError("grid.n_cells must be at least 2");
  if (!(grid.dt > 0.0) || !(grid.horizon > 0.0))
    throw ConfigError("grid.dt and grid.horizon must be positive");
  if (grid.dt > grid.horizon)
    throw ConfigError("grid.dt exceeds grid.horizon");
  if (optimizer.max_iters < 0 || !(optimizer.lambda0 > 0.0) || optimizer.tol_grad < 0.0)
    throw ConfigError("optimizer: max_iters >= 0, lambda0 > 0 and tol_grad >= 0 required");
  if (!(spectrum.peak_threshold >= 0.0 && spectrum.peak_threshold <= 1.0))
    throw ConfigError("spectrum.peak_threshold must lie in [0, 1]");
  if (is_simple(kind)) {
    simple.validate();
    for (int N : convergence_levels) {
      if (N < 2)
        throw ConfigError("validation.levels entries must be at least 2");
      SpaceTimeGrid gl = SpaceTimeGrid::from_horizon(simple.length, N, convergence_dt.value_or(grid.dt), grid.horizon);
      gl.validate_cfl(simple.u0);
    }
  }
  if (is_drier(kind)) {
    drier.validate();
    if (final_window < 0.0 || final_window > grid.horizon)
      throw ConfigError("analysis.final_window must lie in [0, horizon]");
  }
  if (is_nonlinear(kind) && delta_alpha && !(forcing_period > 0.0))
    throw ConfigError("forcing.period must be positive");
  if (kind == ScenarioKind::Spectrum) {
    if (signals.empty())
      throw ConfigError("spectrum scenario needs at least one signal");
    if (SpaceTimeGrid::from_horizon(1.0, grid.n_cells, grid.dt, grid.horizon).n_steps() < 16)
      throw ConfigError("spectrum scenario needs at least 16 time steps");
  }
  make_grid();
}

bool ScenarioConfig::equivalent(const ScenarioConfig& o) const {
  const auto same_drier = [](const DrierParams& a, const DrierParams& b) {
    return a.u0 == b.u0 && a.length == b.length && a.k_f == b.k_f && a.X_star == b.X_star && a.c_ps == b.c_ps &&
           a.c_pl == b.c_pl && a.h_l == b.h_l && a.T_ref == b.T_ref && a.power == b.power && a.area == b.area &&
           a.eps_s0 == b.eps_s0 && a.eps_l0 == b.eps_l0 && a.T0 == b.T0 && a.k_cond == b.k_cond &&
           a.clamp_condensation == b.clamp_condensation;
  };
  const auto same_simple = [](const SimpleModelParams& a, const SimpleModelParams& b) {
    return a.u0 == b.u0 && a.k == b.k && a.length == b.length && a.T_star == b.T_star;
  };
  return name == o.name && kind == o.kind && time_unit == o.time_unit && grid == o.grid && optimizer == o.optimizer &&
         spectrum == o.spectrum && output_dir == o.output_dir && same_simple(simple, o.simple) &&
         simple_inlet == o.simple_inlet && simple_initial == o.simple_initial && simple_control == o.simple_control &&
         convergence_levels == o.convergence_levels && convergence_dt == o.convergence_dt &&
         jump_window == o.jump_window && same_drier(drier, o.drier) && inlet_eps_s == o.inlet_eps_s &&
         inlet_eps_l == o.inlet_eps_l && inlet_T == o.inlet_T && delta_alpha == o.delta_alpha &&
         forcing_period == o.forcing_period && set_point == o.set_point && dump_trajectory == o.dump_trajectory &&
         final_window == o.final_window && signals == o.signals;
}

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    check_keys(doc, "scenario",
               {"schema_version", "name", "kind", "time_unit", "model", "grid", "forcing", "control", "validation",
                "optimizer", "analysis", "spectrum", "signals", "output"});
    ScenarioConfig c;
    if (doc.value("schema_version", 1) != 1)
      throw ConfigError("unsupported scenario schema_version");
    c.name = doc.at("name").get<std::string>();
    c.kind = parse_scenario_kind(doc.at("kind").get<std::string>());
    c.time_unit = parse_time_unit(doc.value("time_unit", is_drier(c.kind) ? "s" : "min"));
    UnitConverter units(c.time_unit);
    Reader r(units, base_dir);

    const json model = doc.value("model", json::object());
    if (is_simple(c.kind))
      read_simple_model(r, model, c);
    else if (is_drier(c.kind))
      read_drier_model(r, model, c);
    else if (!model.empty())
      throw ConfigError("spectrum scenarios take no model block");

    const json& gj = doc.at("grid");
    check_keys(gj, "grid", {"n_cells", "dt", "horizon"});
    c.grid.n_cells = gj.value("n_cells", 200);
    c.grid.dt = r.quantity(gj, "grid", "dt", Dimension::Time);
    c.grid.horizon = r.quantity(gj, "grid", "horizon", Dimension::Time);

    const json forcing = doc.value("forcing", json::object());
    if (is_simple(c.kind)) {
      check_keys(forcing, "forcing", {"inlet"});
      c.simple_inlet = forcing.contains("inlet") ? r.signal(forcing.at("inlet"), "forcing.inlet", Dimension::Temperature)
                                                 : SignalSpec{SignalSpec::Type::Sinusoid, 100.0, 10.0,
                                                              60.0 / seconds_per(c.time_unit), 0.0, {}};
      c.simple_control = doc.contains("control") ? r.signal(doc.at("control"), "control", Dimension::Temperature)
                                                 : SignalSpec::constant(c.simple.T_star);
      const json v = doc.value("validation", json::object());
      check_keys(v, "validation", {"levels", "dt", "jump_window"});
      if (v.contains("levels"))
        c.convergence_levels = v.at("levels").get<std::vector<int>>();
      if (v.contains("dt"))
        c.convergence_dt = r.quantity(v, "validation", "dt", Dimension::Time);
      c.jump_window = r.quantity_or(v, "validation", "jump_window", Dimension::Time, 0.2 * 60.0 / seconds_per(c.time_unit));
    } else if (is_drier(c.kind)) {
      check_keys(forcing, "forcing", {"eps_s", "eps_l", "T", "delta_alpha", "period", "set_point"});
      if (forcing.contains("eps_s"))
        c.inlet_eps_s = r.signal(forcing.at("eps_s"), "forcing.eps_s", Dimension::Density);
      if (forcing.contains("eps_l"))
        c.inlet_eps_l = r.signal(forcing.at("eps_l"), "forcing.eps_l", Dimension::Density);
      if (forcing.contains("T"))
        c.inlet_T = r.signal(forcing.at("T"), "forcing.T", Dimension::Temperature);
      if (forcing.contains("delta_alpha")) {
        if (!is_nonlinear(c.kind))
          throw ConfigError("forcing.delta_alpha applies to nonlinear drier scenarios only");
        if (forcing.contains("eps_s") || forcing.contains("eps_l") || forcing.contains("T"))
          throw ConfigError("forcing: give either delta_alpha/period or explicit inlet signals");
        c.delta_alpha = r.quantity(forcing, "forcing", "delta_alpha", Dimension::Dimensionless);
        c.forcing_period = r.quantity(forcing, "forcing", "period", Dimension::Time);
      } else if (is_nonlinear(c.kind)) {
        // Absolute inlet signals default to the constant reference inlet.
        if (!forcing.contains("eps_s"))
          c.inlet_eps_s = SignalSpec::constant(c.drier.eps_s0);
        if (!forcing.contains("eps_l"))
          c.inlet_eps_l = SignalSpec::constant(c.drier.eps_l0);
        if (!forcing.contains("T"))
          c.inlet_T = SignalSpec::constant(c.drier.T0);
      }
      if (forcing.contains("set_point"))
        c.set_point = r.quantity(forcing, "forcing", "set_point", Dimension::Temperature);
      const json a = doc.value("analysis", json::object());
      check_keys(a, "analysis", {"final_window", "trajectory_storage"});
      c.final_window = r.quantity_or(a, "analysis", "final_window", Dimension::Time, 0.0);
      const std::string storage = a.value("trajectory_storage", "memory");
      if (storage != "memory" && storage != "dump")
        throw ConfigError("analysis.trajectory_storage must be 'memory' or 'dump'");
      c.dump_trajectory = storage == "dump";
    } else if (!forcing.empty()) {
      throw ConfigError("spectrum scenarios take a 'signals' list, not a forcing block");
    }

    if (c.kind == ScenarioKind::Spectrum) {
      const json& sl = doc.at("signals");
      if (!sl.is_array())
        throw ConfigError("signals must be a list");
      for (std::size_t k = 0; k < sl.size(); ++k)
        c.signals.push_back(r.signal(sl[k], "signals[" + std::to_string(k) + "]", Dimension::Dimensionless));
    }

    if (doc.contains("optimizer")) {
      const json& o = doc.at("optimizer");
      check_keys(o, "optimizer", {"max_iters", "tol_grad", "tol_cost", "lambda0"});
      c.optimizer.max_iters = o.value("max_iters", c.optimizer.max_iters);
      c.optimizer.tol_grad = o.value("tol_grad", c.optimizer.tol_grad);
      if (o.contains("tol_cost"))
        c.optimizer.tol_cost = o.at("tol_cost").get<double>();
      c.optimizer.lambda0 = o.value("lambda0", c.optimizer.lambda0);
    }
    if (doc.contains("spectrum")) {
      const json& s = doc.at("spectrum");
      check_keys(s, "spectrum", {"enabled", "exclude_dc", "hann_window", "peak_threshold"});
      c.spectrum.enabled = s.value("enabled", c.spectrum.enabled);
      c.spectrum.exclude_dc = s.value("exclude_dc", c.spectrum.exclude_dc);
      c.spectrum.hann_window = s.value("hann_window", c.spectrum.hann_window);
      c.spectrum.peak_threshold = s.value("peak_threshold", c.spectrum.peak_threshold);
    }
    c.output_dir = doc.value("output", "out/" + c.name);
    c.conversions = units.log();
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), fs::path(path).parent_path().string().empty()
                                      ? std::string(".")
                                      : fs::path(path).parent_path().string());
}

std::string scenario_echo(const ScenarioConfig& c) {
  const UnitConverter u(c.time_unit);
  json d;
  d["schema_version"] = 1;
  d["name"] = c.name;
  d["kind"] = std::string(to_string(c.kind));
  d["time_unit"] = std::string(to_string(c.time_unit));
  d["grid"] = {{"n_cells", c.grid.n_cells},
               {"dt", q(c.grid.dt, u, Dimension::Time)},
               {"horizon", q(c.grid.horizon, u, Dimension::Time)}};
  if (is_simple(c.kind)) {
    d["model"] = {{"u0", q(c.simple.u0, u, Dimension::Velocity)},
                  {"k", q(c.simple.k, u, Dimension::Rate)},
                  {"length", q(c.simple.length, u, Dimension::Length)},
                  {"T_star", q(c.simple.T_star, u, Dimension::Temperature)},
                  {"T_init", q(c.simple_initial, u, Dimension::Temperature)}};
    d["forcing"] = {{"inlet", signal_json(c.simple_inlet, u, Dimension::Temperature)}};
    d["control"] = signal_json(c.simple_control, u, Dimension::Temperature);
    d["validation"] = {{"levels", c.convergence_levels}, {"jump_window", q(c.jump_window, u, Dimension::Time)}};
    if (c.convergence_dt)
      d["validation"]["dt"] = q(*c.convergence_dt, u, Dimension::Time);
  } else if (is_drier(c.kind)) {
    const DrierParams& p = c.drier;
    d["model"] = {{"u0", q(p.u0, u, Dimension::Velocity)},
                  {"length", q(p.length, u, Dimension::Length)},
                  {"k_f", q(p.k_f, u, Dimension::Rate)},
                  {"X_star", p.X_star},
                  {"c_ps", q(p.c_ps, u, Dimension::SpecificHeat)},
                  {"c_pl", q(p.c_pl, u, Dimension::SpecificHeat)},
                  {"h_l", q(p.h_l, u, Dimension::LatentHeat)},
                  {"T_ref", q(p.T_ref, u, Dimension::Temperature)},
                  {"power", q(p.power, u, Dimension::Power)},
                  {"area", q(p.area, u, Dimension::Area)},
                  {"T0", q(p.T0, u, Dimension::Temperature)},
                  {"k_cond", q(p.k_cond, u, Dimension::Conductivity)},
                  {"inlet",
                   {{"eps_s0", q(p.eps_s0, u, Dimension::Density)}, {"eps_l0", q(p.eps_l0, u, Dimension::Density)}}},
                  {"clamp_condensation", p.clamp_condensation}};
    json f = json::object();
    if (c.delta_alpha) {
      f["delta_alpha"] = *c.delta_alpha;
      f["period"] = q(c.forcing_period, u, Dimension::Time);
    } else if (c.kind != ScenarioKind::DrierEquilibrium) {
      f["eps_s"] = signal_json(c.inlet_eps_s, u, Dimension::Density);
      f["eps_l"] = signal_json(c.inlet_eps_l, u, Dimension::Density);
      f["T"] = signal_json(c.inlet_T, u, Dimension::Temperature);
    }
    if (c.set_point)
      f["set_point"] = q(*c.set_point, u, Dimension::Temperature);
    d["forcing"] = f;
    d["analysis"] = {{"trajectory_storage", c.dump_trajectory ? "dump" : "memory"}};
    if (c.final_window > 0.0)
      d["analysis"]["final_window"] = q(c.final_window, u, Dimension::Time);
  } else {
    d["signals"] = json::array();
    for (const auto& s : c.signals)
      d["signals"].push_back(signal_json(s, u, Dimension::Dimensionless));
  }
  d["optimizer"] = {{"max_iters", c.optimizer.max_iters},
                    {"tol_grad", c.optimizer.tol_grad},
                    {"lambda0", c.optimizer.lambda0}};
  if (c.optimizer.tol_cost)
    d["optimizer"]["tol_cost"] = *c.optimizer.tol_cost;
  d["spectrum"] = {{"enabled", c.spectrum.enabled},
                   {"exclude_dc", c.spectrum.exclude_dc},
                   {"hann_window", c.spectrum.hann_window},
                   {"peak_threshold", c.spectrum.peak_threshold}};
  d["output"] = c.output_dir;
  return d.dump(2) + "\n";
}

std::optional<double> RunResult::metric(const std::string& name) const {
  if (summary_json.empty())
    return std::nullopt;
  const json s = json::parse(summary_json, nullptr, false);
  if (s.is_discarded() || !s.contains("metrics") || !s["metrics"].contains(name) || !s["metrics"][name].is_number())
    return std::nullopt;
  return s["metrics"][name].get<double>();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out)
    throw IoError("write to '" + path + "' failed");
}

} // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  RunResult res;
  res.output_dir = options.output_dir.value_or(config.output_dir);
  Runner runner(config, options, res.output_dir);
  json& summary = runner.summary();
  const auto start = std::chrono::steady_clock::now();
  try {
    config.validate();
    runner.run();
    summary["status"] = "ok";
  } catch (const DescentDiverged& e) {
    res.status = RunStatus::Diverged;
    res.message = e.what();
    ResultBundle& b = runner.bundle();
    if (!b.find("trace")) {
      ResultTable t{"trace", {"iter", "J", "alpha", "grad_norm", "wall_ms"}, std::vector<std::vector<double>>(5)};
      for (const auto& row : e.trace().rows) {
        t.columns[0].push_back(row.iter);
        t.columns[1].push_back(row.J);
        t.columns[2].push_back(row.alpha);
        t.columns[3].push_back(row.grad_norm);
        t.columns[4].push_back(row.wall_ms);
      }
      b.add(std::move(t));
    }
  } catch (const DivergenceError& e) {
    res.status = RunStatus::Diverged;
    res.message = e.what();
  } catch (const ConfigError& e) {
    res.status = RunStatus::ConfigError;
    res.message = e.what();
  } catch (const IoError& e) {
    res.status = RunStatus::IoError;
    res.message = e.what();
  } catch (const fs::filesystem_error& e) {
    res.status = RunStatus::IoError;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.status = RunStatus::Failed;
    res.message = e.what();
  }
  if (res.status != RunStatus::Ok) {
    summary["status"] = res.status == RunStatus::Diverged ? "diverged" : "error";
    summary["message"] = res.message;
    summary["partial"] = !runner.bundle().empty();
  }
  summary["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json conv = json::array();
  for (const auto& cv : config.conversions)
    conv.push_back({{"field", cv.field}, {"input", cv.input}, {"value", cv.value}, {"unit", cv.target_unit}});
  summary["conversions"] = conv;

  res.bundle = std::move(runner.bundle());
  try {
    fs::create_directories(res.output_dir);
    res.outputs = emit_plot_data(res.bundle, res.output_dir);
    json names = json::array();
    for (const auto& p : res.outputs)
      names.push_back(fs::path(p).filename().string());
    summary["outputs"] = names;
    res.summary_json = summary.dump(2) + "\n";
    const std::string sp = (fs::path(res.output_dir) / "summary.json").string();
    write_text(sp, res.summary_json);
    const std::string ep = (fs::path(res.output_dir) / "config.echo.json").string();
    write_text(ep, scenario_echo(config));
    res.outputs.push_back(sp);
    res.outputs.push_back(ep);
  } catch (const std::exception& e) {
    if (res.status == RunStatus::Ok) {
      res.status = RunStatus::IoError;
      res.message = e.what();
    }
    if (res.summary_json.empty())
      res.summary_json = summary.dump(2) + "\n";
  }
  return res;
}

std::vector<RunResult> run_batch(const std::string& dir, const RunOptions& options, int jobs) {
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".json")
      files.push_back(e.path().string());
  if (ec)
    throw IoError("cannot read batch directory '" + dir + "': " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<RunResult> results(files.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++) {
      try {
        const ScenarioConfig c = load_scenario(files[k]);
        RunOptions o = options;
        if (options.output_dir)
          o.output_dir = (fs::path(*options.output_dir) / c.name).string();
        results[k] = run_scenario(c, o);
      } catch (const ConfigError& e) {
        results[k].status = RunStatus::ConfigError;
        results[k].message = files[k] + ": " + e.what();
      }
    }
  };
  const int n = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, files.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t)
      pool.emplace_back(worker);
    worker();
  }
  return results;
}

} // namespace dryctl
