/*
 * C interface to the seasonal CUSUM library.
 *
 * Every function returning int returns a scusum_status. On failure the
 * message is available from scusum_last_error() until the next call on the
 * same thread. Objects are opaque and owned by the caller once created.
 * Dates are "YYYY-MM-DD", instants "YYYY-MM-DDTHH:MM[:SS[.ffffff]]".
 */
#ifndef SCUSUM_H
#define SCUSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SCUSUM_API __declspec(dllexport)
#else
#define SCUSUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scusum_status {
  SCUSUM_OK = 0,
  SCUSUM_ERROR_INTERNAL = 1,
  SCUSUM_ERROR_INPUT = 2,   /* bad files, arguments or data coverage */
  SCUSUM_ERROR_NUMERIC = 3  /* fit non-convergence, calibration failure */
} scusum_status;

typedef enum scusum_mode {
  SCUSUM_MODE_AGGREGATED = 0,
  SCUSUM_MODE_EVENTS = 1
} scusum_mode;

typedef enum scusum_scenario {
  SCUSUM_SCENARIO_IDENTITY = 0,
  SCUSUM_SCENARIO_POSTPONE_THIRD_TUESDAY = 1
} scusum_scenario;

typedef struct scusum_model scusum_model;
typedef struct scusum_detector scusum_detector;

SCUSUM_API const char* scusum_version(void);
SCUSUM_API const char* scusum_last_error(void);
/* Summary line followed by "warning: ..." lines of the last scusum_run_* call. */
SCUSUM_API const char* scusum_last_report(void);
/* Caps replication threads; 0 restores the SEASONAL_CUSUM_THREADS default. */
SCUSUM_API void scusum_set_max_threads(int n);

SCUSUM_API int scusum_beta(double rho, double* out);

SCUSUM_API int scusum_model_load(const char* path, scusum_model** out);
SCUSUM_API int scusum_model_save(const scusum_model* model, const char* path);
SCUSUM_API void scusum_model_free(scusum_model* model);
/* Constant-rate model at the baseline recorded when the model was fitted. */
SCUSUM_API int scusum_model_naive(const scusum_model* model, scusum_model** out);
SCUSUM_API int scusum_model_slot_intensity(const scusum_model* model, const char* date, int slot,
                                           double* out);
SCUSUM_API int scusum_model_cumulative_intensity(const scusum_model* model, const char* from,
                                                 const char* to, double* out);

typedef struct scusum_detector_config {
  double rho;        /* > 1: increase, in (0, 1): decrease */
  double threshold;  /* m > 0 */
  int reset_on_alarm;
} scusum_detector_config;

SCUSUM_API void scusum_detector_config_init(scusum_detector_config* config);
SCUSUM_API int scusum_detector_create(const scusum_detector_config* config, scusum_detector** out);
SCUSUM_API void scusum_detector_free(scusum_detector* detector);
/* Aggregated-count update; *alarm is set to 1 when the step raised an alarm. */
SCUSUM_API int scusum_detector_step(scusum_detector* detector, int64_t count,
                                    double lambda_increment, int* alarm);
SCUSUM_API int scusum_detector_state(const scusum_detector* detector, double* v, double* u,
                                     int64_t* events_seen);

/* Command options. Call the matching *_init first; NULL strings mean "not given". */
typedef struct scusum_detector_options {
  double rho;
  int has_m;
  double m;
  int has_pi;
  double pi;
  int mode;
  int reset_on_alarm;
  int naive_lambda;
  int double_sided;
  double rho_down; /* <= 0: 1 / rho */
  int replications;
  int horizon_days;
  double tolerance_rel;
  uint64_t seed;
} scusum_detector_options;

typedef struct scusum_fit_options {
  const char* daily;
  const char* slots;
  const char* holidays;
  const char* origin;
  const char* split_date;
  int scenario;
  const char* out;
} scusum_fit_options;

typedef struct scusum_calibrate_options {
  const char* model;
  scusum_detector_options detector;
  const char* start;
  const char* out;
} scusum_calibrate_options;

typedef struct scusum_simulate_options {
  const char* model;
  const char* start;
  const char* end;
  uint64_t seed;
  const char* theta;
  double rho;
  int events;
  int scenario;
  const char* out;
} scusum_simulate_options;

typedef struct scusum_detect_options {
  const char* model;
  const char* series;
  const char* events;
  scusum_detector_options detector;
  int scenario;
  const char* out;
} scusum_detect_options;

typedef struct scusum_evaluate_options {
  const char* model;
  scusum_detector_options detector;
  const char* start;
  const char* end;
  const char* const* thetas;
  size_t n_thetas;
  int replications;
  uint64_t seed;
  const char* out;
} scusum_evaluate_options;

typedef struct scusum_scenario_options {
  const char* series;
  const char* model;
  int scenario;
  const char* out;
} scusum_scenario_options;

SCUSUM_API void scusum_detector_options_init(scusum_detector_options* options);
SCUSUM_API void scusum_fit_options_init(scusum_fit_options* options);
SCUSUM_API void scusum_calibrate_options_init(scusum_calibrate_options* options);
SCUSUM_API void scusum_simulate_options_init(scusum_simulate_options* options);
SCUSUM_API void scusum_detect_options_init(scusum_detect_options* options);
SCUSUM_API void scusum_evaluate_options_init(scusum_evaluate_options* options);
SCUSUM_API void scusum_scenario_options_init(scusum_scenario_options* options);

SCUSUM_API int scusum_run_fit(const scusum_fit_options* options);
SCUSUM_API int scusum_run_calibrate(const scusum_calibrate_options* options);
SCUSUM_API int scusum_run_simulate(const scusum_simulate_options* options);
SCUSUM_API int scusum_run_detect(const scusum_detect_options* options);
SCUSUM_API int scusum_run_evaluate(const scusum_evaluate_options* options);
SCUSUM_API int scusum_run_scenario(const scusum_scenario_options* options);

#ifdef __cplusplus
}
#endif

#endif
