#include "dryctl/dryctl.h"

#include "dryctl/errors.hpp"
#include "dryctl/scenario.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

struct dryctl_scenario {
  dryctl::ScenarioConfig config;
  std::string name;
  std::string kind;
  std::string echo;
};

struct dryctl_result {
  dryctl::RunResult run;
};

namespace {

thread_local std::string g_last_error;

dryctl_status fail(dryctl_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

// Maps the library's exception hierarchy onto status codes.
template <class F>
dryctl_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const dryctl::ConfigError& e) {
    return fail(DRYCTL_ERR_CONFIG, e.what());
  } catch (const dryctl::DivergenceError& e) {
    return fail(DRYCTL_ERR_DIVERGENCE, e.what());
  } catch (const dryctl::IoError& e) {
    return fail(DRYCTL_ERR_IO, e.what());
  } catch (const dryctl::Error& e) {
    return fail(DRYCTL_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(DRYCTL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DRYCTL_ERR_INTERNAL, "unknown error");
  }
}

dryctl_status from_run(dryctl::RunStatus s) {
  switch (s) {
  case dryctl::RunStatus::Ok: return DRYCTL_OK;
  case dryctl::RunStatus::ConfigError: return DRYCTL_ERR_CONFIG;
  case dryctl::RunStatus::Diverged: return DRYCTL_ERR_DIVERGENCE;
  case dryctl::RunStatus::IoError: return DRYCTL_ERR_IO;
  case dryctl::RunStatus::Failed: return DRYCTL_ERR_NUMERIC;
  }
  return DRYCTL_ERR_INTERNAL;
}

dryctl_scenario* wrap(dryctl::ScenarioConfig c) {
  auto* s = new dryctl_scenario{std::move(c), {}, {}, {}};
  s->name = s->config.name;
  s->kind = std::string(dryctl::to_string(s->config.kind));
  s->echo = dryctl::scenario_echo(s->config);
  return s;
}

std::function<void(const std::string&)> make_log(dryctl_log_fn log, void* user) {
  if (!log)
    return {};
  return [log, user](const std::string& line) { log(line.c_str(), user); };
}

} // namespace

extern "C" {

const char* dryctl_version(void) { return "0.1.0"; }

const char* dryctl_status_name(dryctl_status status) {
  switch (status) {
  case DRYCTL_OK: return "ok";
  case DRYCTL_ERR_INVALID_ARGUMENT: return "invalid argument";
  case DRYCTL_ERR_CONFIG: return "configuration error";
  case DRYCTL_ERR_DIVERGENCE: return "numerical divergence";
  case DRYCTL_ERR_IO: return "i/o error";
  case DRYCTL_ERR_NUMERIC: return "numerical error";
  case DRYCTL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dryctl_last_error(void) { return g_last_error.c_str(); }

dryctl_status dryctl_scenario_load(const char* path, dryctl_scenario** out) {
  if (!path || !out)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(dryctl::load_scenario(path));
    return DRYCTL_OK;
  });
}

dryctl_status dryctl_scenario_parse(const char* json_text, const char* base_dir, dryctl_scenario** out) {
  if (!json_text || !out)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "json_text and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(dryctl::parse_scenario(json_text, base_dir ? base_dir : "."));
    return DRYCTL_OK;
  });
}

void dryctl_scenario_free(dryctl_scenario* scenario) { delete scenario; }

const char* dryctl_scenario_name(const dryctl_scenario* s) { return s ? s->name.c_str() : ""; }
const char* dryctl_scenario_kind(const dryctl_scenario* s) { return s ? s->kind.c_str() : ""; }
const char* dryctl_scenario_echo(const dryctl_scenario* s) { return s ? s->echo.c_str() : ""; }

dryctl_status dryctl_scenario_set_output_dir(dryctl_scenario* s, const char* dir) {
  if (!s || !dir || !*dir)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "scenario and a non-empty dir are required");
  s->config.output_dir = dir;
  s->echo = dryctl::scenario_echo(s->config);
  return DRYCTL_OK;
}

dryctl_status dryctl_scenario_set_max_iters(dryctl_scenario* s, int max_iters) {
  if (!s || max_iters < 0)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "scenario required and max_iters must be >= 0");
  s->config.optimizer.max_iters = max_iters;
  s->echo = dryctl::scenario_echo(s->config);
  return DRYCTL_OK;
}

dryctl_status dryctl_run(const dryctl_scenario* s, dryctl_log_fn log, void* user, dryctl_result** out) {
  if (!s || !out)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "scenario and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    dryctl::RunOptions o;
    o.log = make_log(log, user);
    o.quiet = !log;
    auto* r = new dryctl_result{dryctl::run_scenario(s->config, o)};
    *out = r;
    const dryctl_status st = from_run(r->run.status);
    if (st != DRYCTL_OK)
      g_last_error = r->run.message;
    return st;
  });
}

void dryctl_result_free(dryctl_result* r) { delete r; }

dryctl_status dryctl_result_status(const dryctl_result* r) {
  return r ? from_run(r->run.status) : DRYCTL_ERR_INVALID_ARGUMENT;
}
const char* dryctl_result_message(const dryctl_result* r) { return r ? r->run.message.c_str() : ""; }
const char* dryctl_result_summary_json(const dryctl_result* r) { return r ? r->run.summary_json.c_str() : ""; }
const char* dryctl_result_output_dir(const dryctl_result* r) { return r ? r->run.output_dir.c_str() : ""; }

dryctl_status dryctl_result_metric(const dryctl_result* r, const char* name, double* value) {
  if (!r || !name || !value)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "result, name and value must not be NULL");
  return guarded([&] {
    const auto m = r->run.metric(name);
    if (!m)
      return fail(DRYCTL_ERR_INVALID_ARGUMENT, std::string("no numeric metric '") + name + "'");
    *value = *m;
    return DRYCTL_OK;
  });
}

size_t dryctl_result_output_count(const dryctl_result* r) { return r ? r->run.outputs.size() : 0; }

const char* dryctl_result_output_path(const dryctl_result* r, size_t index) {
  if (!r || index >= r->run.outputs.size())
    return nullptr;
  return r->run.outputs[index].c_str();
}

dryctl_status dryctl_result_column(const dryctl_result* r, const char* table, const char* column, double* buffer,
                                   size_t capacity, size_t* length) {
  if (!r || !table || !column || !length)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "result, table, column and length must not be NULL");
  const dryctl::ResultTable* t = r->run.bundle.find(table);
  if (!t)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, std::string("no result table '") + table + "'");
  const auto it = std::find(t->header.begin(), t->header.end(), column);
  if (it == t->header.end())
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, std::string("table '") + table + "' has no column '" + column + "'");
  const auto& col = t->columns[static_cast<std::size_t>(it - t->header.begin())];
  *length = col.size();
  if (buffer)
    std::copy_n(col.begin(), std::min(capacity, col.size()), buffer);
  return DRYCTL_OK;
}

dryctl_status dryctl_batch(const char* dir, const char* output_dir, int max_iters, int jobs, dryctl_log_fn log,
                           void* user, size_t* n_run, size_t* n_failed) {
  if (!dir)
    return fail(DRYCTL_ERR_INVALID_ARGUMENT, "dir must not be NULL");
  return guarded([&] {
    // The callback may be shared by several workers.
    auto mtx = std::make_shared<std::mutex>();
    dryctl::RunOptions o;
    if (log)
      o.log = [log, user, mtx](const std::string& line) {
        std::lock_guard lock(*mtx);
        log(line.c_str(), user);
      };
    o.quiet = !log;
    if (output_dir)
      o.output_dir = output_dir;
    if (max_iters >= 0)
      o.max_iters = max_iters;
    const auto results = dryctl::run_batch(dir, o, jobs);
    size_t failed = 0;
    dryctl_status worst = DRYCTL_OK;
    std::string messages;
    for (const auto& r : results) {
      const dryctl_status st = from_run(r.status);
      if (st != DRYCTL_OK) {
        ++failed;
        worst = std::max(worst, st);
        messages += (messages.empty() ? "" : "; ") + r.message;
      }
    }
    if (n_run)
      *n_run = results.size();
    if (n_failed)
      *n_failed = failed;
    if (worst != DRYCTL_OK)
      g_last_error = messages;
    return worst;
  });
}

} // extern "C"
