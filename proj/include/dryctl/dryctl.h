/* C interface of the dryctl shared library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every function that can fail returns a
 * dryctl_status; the message of the most recent failure on the calling
 * thread is available from dryctl_last_error(). Strings returned by the
 * library stay valid until the owning handle is freed.
 */
#ifndef DRYCTL_DRYCTL_H
#define DRYCTL_DRYCTL_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DRYCTL_BUILDING_LIBRARY)
#    define DRYCTL_API __declspec(dllexport)
#  else
#    define DRYCTL_API __declspec(dllimport)
#  endif
#else
#  define DRYCTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2..4 double as process exit codes of the command-line tool. */
typedef enum dryctl_status {
  DRYCTL_OK = 0,
  DRYCTL_ERR_INVALID_ARGUMENT = 1,
  DRYCTL_ERR_CONFIG = 2,
  DRYCTL_ERR_DIVERGENCE = 3,
  DRYCTL_ERR_IO = 4,
  DRYCTL_ERR_NUMERIC = 5, /* singular state, domain error, no control exists */
  DRYCTL_ERR_INTERNAL = 6
} dryctl_status;

typedef struct dryctl_scenario dryctl_scenario;
typedef struct dryctl_result dryctl_result;

DRYCTL_API const char* dryctl_version(void);
DRYCTL_API const char* dryctl_status_name(dryctl_status status);

/* Message of the last failed call on this thread, "" if none. */
DRYCTL_API const char* dryctl_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

DRYCTL_API dryctl_status dryctl_scenario_load(const char* path, dryctl_scenario** out);

/* Parses a JSON document; relative file paths resolve against base_dir
 * (NULL means the working directory). */
DRYCTL_API dryctl_status dryctl_scenario_parse(const char* json_text, const char* base_dir, dryctl_scenario** out);

DRYCTL_API void dryctl_scenario_free(dryctl_scenario* scenario);

DRYCTL_API const char* dryctl_scenario_name(const dryctl_scenario* scenario);
DRYCTL_API const char* dryctl_scenario_kind(const dryctl_scenario* scenario);

/* Normalised document with all values in the scenario's units. */
DRYCTL_API const char* dryctl_scenario_echo(const dryctl_scenario* scenario);

DRYCTL_API dryctl_status dryctl_scenario_set_output_dir(dryctl_scenario* scenario, const char* dir);
DRYCTL_API dryctl_status dryctl_scenario_set_max_iters(dryctl_scenario* scenario, int max_iters);

/* ---- running ------------------------------------------------------------ */

/* Called with one progress line at a time; may be invoked from worker
 * threads during dryctl_batch. */
typedef void (*dryctl_log_fn)(const char* line, void* user);

/* Runs the scenario and writes its outputs. *out receives a result handle
 * whenever the run got far enough to produce a summary, including on
 * divergence; the return value is the run's status. */
DRYCTL_API dryctl_status dryctl_run(const dryctl_scenario* scenario, dryctl_log_fn log, void* user,
                                    dryctl_result** out);

DRYCTL_API void dryctl_result_free(dryctl_result* result);

DRYCTL_API dryctl_status dryctl_result_status(const dryctl_result* result);
DRYCTL_API const char* dryctl_result_message(const dryctl_result* result);
DRYCTL_API const char* dryctl_result_summary_json(const dryctl_result* result);
DRYCTL_API const char* dryctl_result_output_dir(const dryctl_result* result);

/* Numeric entry of the summary's "metrics" object. */
DRYCTL_API dryctl_status dryctl_result_metric(const dryctl_result* result, const char* name, double* value);

DRYCTL_API size_t dryctl_result_output_count(const dryctl_result* result);
DRYCTL_API const char* dryctl_result_output_path(const dryctl_result* result, size_t index);

/* Column of a result table ("control", "outlet", "spectrum", ...). Copies up
 * to capacity values into buffer and stores the column length in *length;
 * pass buffer = NULL to query the length. */
DRYCTL_API dryctl_status dryctl_result_column(const dryctl_result* result, const char* table, const char* column,
                                              double* buffer, size_t capacity, size_t* length);

/* ---- batches ------------------------------------------------------------ */

/* Runs every *.json scenario in dir with up to `jobs` workers. output_dir
 * (may be NULL) overrides each scenario's output as <output_dir>/<name>;
 * max_iters < 0 keeps each scenario's own limit. *n_failed (may be NULL)
 * receives the number of scenarios that did not finish cleanly. Returns the
 * worst status among the runs. */
DRYCTL_API dryctl_status dryctl_batch(const char* dir, const char* output_dir, int max_iters, int jobs,
                                      dryctl_log_fn log, void* user, size_t* n_run, size_t* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* DRYCTL_DRYCTL_H */
