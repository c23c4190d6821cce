// Command-line front end; talks to the library only through the C API.

#include "dryctl/dryctl.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>

namespace {

struct ScenarioDeleter {
  void operator()(dryctl_scenario* s) const { dryctl_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(dryctl_result* r) const { dryctl_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<dryctl_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<dryctl_result, ResultDeleter>;

int exit_code(dryctl_status s) {
  switch (s) {
  case DRYCTL_OK: return 0;
  case DRYCTL_ERR_CONFIG:
  case DRYCTL_ERR_DIVERGENCE:
  case DRYCTL_ERR_IO: return static_cast<int>(s);
  default: return 1;
  }
}

void to_stderr(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int report(dryctl_status s) {
  std::fprintf(stderr, "dryctl: %s: %s\n", dryctl_status_name(s), dryctl_last_error());
  return exit_code(s);
}

ScenarioPtr load(const std::string& path, dryctl_status& status) {
  dryctl_scenario* raw = nullptr;
  status = dryctl_scenario_load(path.c_str(), &raw);
  return ScenarioPtr(raw);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal heat-source control of conveyor driers: scenario runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dryctl_version()));

  std::string config, dir, out;
  int max_iters = -1;
  int jobs = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run one scenario and write its result bundle");
  run->add_option("config", config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides the scenario's)");
  run->add_option("--max-iters", max_iters, "Descent iteration limit (overrides the scenario's)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--quiet,-q", quiet, "Suppress progress and summary output");

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("config", config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  validate->add_flag("--quiet,-q", quiet, "Print nothing on success");

  auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory in parallel");
  batch->add_option("dir", dir, "Directory of scenario files")->required()->check(CLI::ExistingDirectory);
  batch->add_option("--out", out, "Parent output directory; each scenario writes to <out>/<name>");
  batch->add_option("--max-iters", max_iters, "Descent iteration limit for every scenario")
      ->check(CLI::NonNegativeNumber);
  batch->add_option("--jobs,-j", jobs, "Parallel workers (default: one per scenario)")->check(CLI::NonNegativeNumber);
  batch->add_flag("--quiet,-q", quiet, "Suppress progress output");

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    dryctl_status st;
    const ScenarioPtr s = load(config, st);
    if (st != DRYCTL_OK)
      return report(st);
    if (!quiet)
      std::printf("%s", dryctl_scenario_echo(s.get()));
    return 0;
  }

  if (*run) {
    dryctl_status st;
    const ScenarioPtr s = load(config, st);
    if (st != DRYCTL_OK)
      return report(st);
    if (!out.empty() && (st = dryctl_scenario_set_output_dir(s.get(), out.c_str())) != DRYCTL_OK)
      return report(st);
    if (max_iters >= 0 && (st = dryctl_scenario_set_max_iters(s.get(), max_iters)) != DRYCTL_OK)
      return report(st);
    dryctl_result* raw = nullptr;
    st = dryctl_run(s.get(), quiet ? nullptr : to_stderr, nullptr, &raw);
    const ResultPtr r(raw);
    if (r && !quiet)
      std::printf("%s", dryctl_result_summary_json(r.get()));
    if (st != DRYCTL_OK)
      return report(st);
    if (!quiet)
      std::fprintf(stderr, "results written to %s\n", dryctl_result_output_dir(r.get()));
    return 0;
  }

  size_t n_run = 0, n_failed = 0;
  const dryctl_status st = dryctl_batch(dir.c_str(), out.empty() ? nullptr : out.c_str(), max_iters,
                                        jobs > 0 ? jobs : 1 << 16, quiet ? nullptr : to_stderr, nullptr, &n_run,
                                        &n_failed);
  if (!quiet)
    std::fprintf(stderr, "%zu scenario(s) run, %zu failed\n", n_run, n_failed);
  return st == DRYCTL_OK ? 0 : report(st);
}
