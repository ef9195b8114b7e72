/* hslab: experiment runner for weighted heat semigroups on the half-space.
 * Plain C interface over opaque handles. Every call that can fail returns an
 * hslab_status; hslab_last_error() holds the message for the calling thread. */
#ifndef HSLAB_H
#define HSLAB_H

#include <stddef.h>

#if defined(HSLAB_BUILDING)
#define HSLAB_API __attribute__((visibility("default")))
#else
#define HSLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hslab_status {
  HSLAB_OK = 0,
  HSLAB_NON_INTEGRABLE_WEIGHT = 1,
  HSLAB_TAIL_NOT_CONVERGED = 2,
  HSLAB_INSUFFICIENT_DERIVATIVES = 3,
  HSLAB_HYPOTHESIS_VIOLATED = 4,
  HSLAB_DERIVATIVE_ORDER_LOST = 5,
  HSLAB_NO_TRACE = 6,
  HSLAB_QUADRATURE_DIVERGED = 7,
  HSLAB_SECTOR_VIOLATION = 8,
  HSLAB_FIT_REJECTED = 9,
  HSLAB_BRANCH_CUT = 10,
  HSLAB_ALIAS_WARNING = 11,
  HSLAB_UNBOUNDED_SYMBOL = 12,
  HSLAB_CONTOUR_NOT_CONVERGED = 13,
  HSLAB_SYMBOL_UNBOUNDED_ON_CONTOUR = 14,
  HSLAB_TIME_STEP_NOT_CONVERGED = 15,
  HSLAB_CONFIG_INVALID = 16,
  HSLAB_MISSING_CRITERION = 17,
  HSLAB_INVALID_ARGUMENT = 18,
  HSLAB_INTERNAL = 99
} hslab_status;

typedef enum hslab_row_status { HSLAB_ROW_PASS = 0, HSLAB_ROW_FAIL = 1, HSLAB_ROW_INFO = 2 } hslab_row_status;

typedef struct hslab_config hslab_config;
typedef struct hslab_report hslab_report;
typedef struct hslab_summary hslab_summary;

/* Strings are owned by the handle they came from. */
typedef struct hslab_row {
  const char* key;       /* prefixed "C<id>:" when the row implements a criterion */
  const char* metric;
  const char* value;     /* 17 significant digits, or a verdict / error name */
  double numeric;        /* NaN for text values */
  const char* tolerance;
  hslab_row_status status;
  int criterion;         /* 0 for info rows */
} hslab_row;

typedef struct hslab_criterion_row {
  int id;
  const char* title;
  int passed;
  int over_budget;
  double runtime_seconds;
  double budget_seconds;
  size_t rows;
  size_t failed_rows;
  const char* configs;   /* ';'-separated config stems */
} hslab_criterion_row;

typedef void (*hslab_progress_fn)(const hslab_criterion_row* row, void* user);

typedef struct hslab_acceptance_options {
  const char* out_dir;        /* NULL: $LAB_OUT_DIR, else ./lab_out */
  int require_all;            /* nonzero: MissingCriterion if any id is uncovered */
  int jobs;                   /* concurrent configs, >= 1 */
  const hslab_config* overrides; /* NULL, or a config whose entries are applied to every file */
  hslab_progress_fn progress; /* called once per criterion, in id order */
  void* user;
} hslab_acceptance_options;

HSLAB_API const char* hslab_version(void);
HSLAB_API const char* hslab_status_name(hslab_status s);
HSLAB_API const char* hslab_last_error(void);

/* configs */
HSLAB_API hslab_status hslab_config_load(const char* path, hslab_config** out);
HSLAB_API hslab_status hslab_config_parse(const char* text, hslab_config** out);
/* an empty config for collecting overrides (no `experiment` required) */
HSLAB_API hslab_status hslab_config_new(hslab_config** out);
HSLAB_API hslab_status hslab_config_set(hslab_config* c, const char* key, const char* value);
/* NULL when absent */
HSLAB_API const char* hslab_config_get(const hslab_config* c, const char* key);
HSLAB_API void hslab_config_free(hslab_config* c);

/* a single run; module errors are reported as failed rows, only ConfigInvalid is returned */
HSLAB_API hslab_status hslab_run(const hslab_config* c, hslab_report** out);
HSLAB_API size_t hslab_report_row_count(const hslab_report* r);
HSLAB_API hslab_status hslab_report_row(const hslab_report* r, size_t i, hslab_row* out);
HSLAB_API int hslab_report_passed(const hslab_report* r);
HSLAB_API double hslab_report_runtime(const hslab_report* r);
HSLAB_API const char* hslab_report_csv(const hslab_report* r);
HSLAB_API const char* hslab_report_metadata(const hslab_report* r);
/* path NULL: the config's resolved output path; the sidecar goes to path + ".meta.json" */
HSLAB_API hslab_status hslab_report_write(const hslab_report* r, const char* path);
HSLAB_API const char* hslab_report_output_path(const hslab_report* r);
HSLAB_API void hslab_report_free(hslab_report* r);

/* acceptance over every *.cfg in dir */
HSLAB_API hslab_status hslab_acceptance(const char* dir, const hslab_acceptance_options* opt, hslab_summary** out);
HSLAB_API size_t hslab_summary_row_count(const hslab_summary* s);
HSLAB_API hslab_status hslab_summary_row(const hslab_summary* s, size_t i, hslab_criterion_row* out);
HSLAB_API int hslab_summary_passed(const hslab_summary* s);
HSLAB_API double hslab_summary_runtime(const hslab_summary* s);
/* comma-separated uncovered ids, "" when complete */
HSLAB_API const char* hslab_summary_missing(const hslab_summary* s);
HSLAB_API const char* hslab_summary_csv(const hslab_summary* s);
HSLAB_API void hslab_summary_free(hslab_summary* s);

#ifdef __cplusplus
}
#endif

#endif
