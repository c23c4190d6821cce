#pragma once

// Scenario files: one JSON document per run, every physical value written as
// a quantity string with its unit ("0.5 1/min", "8.5 min"). Values are
// converted once, at load, into the scenario's time unit.

#include "dryctl/bundle.hpp"
#include "dryctl/drier_model.hpp"
#include "dryctl/simple_model.hpp"
#include "dryctl/spectrum.hpp"
#include "dryctl/units.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dryctl {

inline constexpr int kSummarySchemaVersion = 1;

enum class ScenarioKind {
  SimpleValidate,
  SimpleControl,
  DrierEquilibrium,
  DrierLinearControl,
  DrierNonlinearControl,
  DrierConstrainedControl,
  Spectrum,
};

std::string_view to_string(ScenarioKind kind) noexcept;
ScenarioKind parse_scenario_kind(std::string_view text);

/// A forcing or initial-guess signal in converted units.
struct SignalSpec {
  enum class Type { Constant, Sinusoid, File };
  Type type = Type::Constant;
  double mean = 0.0; ///< the constant value for Type::Constant
  double amplitude = 0.0;
  double period = 0.0;
  double phase = 0.0; ///< radians
  std::string path;   ///< resolved path of a two-column CSV for Type::File

  static SignalSpec constant(double v) { return {Type::Constant, v, 0.0, 0.0, 0.0, {}}; }
  Signal to_signal() const;
  bool operator==(const SignalSpec&) const = default;
};

struct GridSpec {
  int n_cells = 200;
  double dt = 0.0;
  double horizon = 0.0;
  bool operator==(const GridSpec&) const = default;
};

struct OptimizerSpec {
  int max_iters = 1000;
  double tol_grad = 1e-8;
  /// Empty means the default 1e-10 * T_star^2 * tau.
  std::optional<double> tol_cost;
  double lambda0 = 1e-3;
  bool operator==(const OptimizerSpec&) const = default;
};

struct SpectrumSpec {
  bool enabled = true;
  bool exclude_dc = true;
  bool hann_window = false;
  double peak_threshold = 0.05;
  bool operator==(const SpectrumSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  ScenarioKind kind = ScenarioKind::SimpleValidate;
  TimeUnit time_unit = TimeUnit::Minute;
  GridSpec grid;
  OptimizerSpec optimizer;
  SpectrumSpec spectrum;
  std::string output_dir;

  // One-equation model.
  SimpleModelParams simple;
  SignalSpec simple_inlet;
  double simple_initial = 0.0;
  /// Applied control (validate) or initial guess (control).
  SignalSpec simple_control;
  std::vector<int> convergence_levels{100, 200, 400};
  /// Time step of the convergence study; empty means grid.dt.
  std::optional<double> convergence_dt;
  /// Half-width of the window around t0 excluded from the control comparison.
  double jump_window = 0.2;

  // Drier.
  DrierParams drier;
  /// Linear runs: perturbations. Nonlinear runs: absolute inlet signals,
  /// used only when delta_alpha is empty.
  SignalSpec inlet_eps_s, inlet_eps_l, inlet_T;
  /// Relative sinusoidal inlet around the equilibrium inlet state.
  std::optional<double> delta_alpha;
  double forcing_period = 0.0;
  /// Set point of nonlinear runs; empty means the equilibrium outlet value.
  std::optional<double> set_point;
  bool dump_trajectory = false;
  /// Length of the trailing window used for outlet reduction metrics.
  double final_window = 0.0;

  // Spectrum scenario: sum of these signals sampled on the grid.
  std::vector<SignalSpec> signals;

  /// Conversions performed at load, for the run log.
  std::vector<Conversion> conversions;

  /// Throws ConfigError on anything inconsistent, including CFL violations.
  void validate() const;
  SpaceTimeGrid make_grid() const;
  /// Field-wise equality ignoring the conversion log.
  bool equivalent(const ScenarioConfig& other) const;
};

/// Parses a scenario document. Relative file paths are resolved against
/// base_dir. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text, const std::string& base_dir = ".");
ScenarioConfig load_scenario(const std::string& path);

/// Normalised document with every value in the scenario's own units; loading
/// it again gives an equivalent config.
std::string scenario_echo(const ScenarioConfig& config);

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<int> max_iters;
  bool quiet = false;
  /// Receives progress lines unless quiet.
  std::function<void(const std::string&)> log;
};

enum class RunStatus { Ok = 0, ConfigError = 2, Diverged = 3, IoError = 4, Failed = 5 };

struct RunResult {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::string summary_json;
  std::string output_dir;
  std::vector<std::string> outputs;
  ResultBundle bundle;

  int exit_code() const noexcept { return static_cast<int>(status); }
  /// Numeric entry of the summary's "metrics" object, if present.
  std::optional<double> metric(const std::string& name) const;
};

/// Runs the pipeline, writes the bundle, summary.json and config.echo.json
/// into the output directory. Never throws; failures are reported in the
/// status and message.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Loads and runs every *.json file in dir (sorted by name), up to `jobs`
/// at a time. Each scenario writes to <output_dir>/<name> when an output
/// directory is given.
std::vector<RunResult> run_batch(const std::string& dir, const RunOptions& options, int jobs);

} // namespace dryctl
