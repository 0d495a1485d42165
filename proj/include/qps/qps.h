/* C interface to the projective-simulation learning simulator.
 *
 * All functions return a qps_status; QPS_OK is 0. On any failure the
 * thread-local message from qps_last_error() describes what went wrong.
 * Objects are opaque handles freed with their matching *_free function.
 */
#ifndef QPS_QPS_H
#define QPS_QPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QPS_API __declspec(dllexport)
#else
#define QPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t qps_status;

enum {
  QPS_OK = 0,
  QPS_ERROR_INVALID_ARGUMENT = 1,
  QPS_ERROR_PARSE = 2,
  QPS_ERROR_IO = 3,
  QPS_ERROR_RUNTIME = 4
};

typedef struct qps_config qps_config;
typedef struct qps_result qps_result;
typedef struct qps_curve qps_curve;

/* Message for the most recent failure on this thread ("" when none). */
QPS_API const char* qps_last_error(void);

/* ---- configuration ---- */

/* A config with every key at its documented default. */
QPS_API qps_status qps_config_create(qps_config** out);
/* Parse "key = value" text / file; diagnostics carry line numbers. */
QPS_API qps_status qps_config_parse(const char* text, qps_config** out);
QPS_API qps_status qps_config_parse_file(const char* path, qps_config** out);
/* Override a single key with a textual value (same syntax as files). */
QPS_API qps_status qps_config_set(qps_config* config, const char* key, const char* value);
/* Canonical echo of the resolved config; free with qps_string_free. */
QPS_API qps_status qps_config_resolved_text(const qps_config* config, char** out);
QPS_API void qps_config_free(qps_config* config);

/* ---- execution ---- */

/* Runs the configured ensemble on `threads` worker threads (>=1). Output is
 * bit-identical for any thread count. */
QPS_API qps_status qps_run(const qps_config* config, int threads, qps_result** out);
QPS_API void qps_result_free(qps_result* result);

/* One curve for solo runs; two (agent 1, agent 2) for interacting runs. */
QPS_API int qps_result_curve_count(const qps_result* result);
QPS_API const qps_curve* qps_result_curve(const qps_result* result, int index);

/* ---- curves ---- */

QPS_API int qps_curve_trial_count(const qps_curve* curve);
QPS_API int qps_curve_percept_count(const qps_curve* curve);
QPS_API double qps_curve_mean(const qps_curve* curve, int trial);
QPS_API double qps_curve_std(const qps_curve* curve, int trial);
/* NaN when no ensemble member drew this percept at this trial. */
QPS_API double qps_curve_percept_mean(const qps_curve* curve, int trial, int percept);

QPS_API qps_status qps_curve_write_csv(const qps_curve* curve, const char* path);
QPS_API qps_status qps_curve_write_svg(const qps_curve* curve, const char* path);
/* CSV as a string; free with qps_string_free. */
QPS_API qps_status qps_curve_csv_string(const qps_curve* curve, char** out);

QPS_API void qps_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* QPS_QPS_H */
