#ifndef HARNACKLAB_H
#define HARNACKLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HL_API __declspec(dllexport)
#elif defined(HL_BUILDING_LIBRARY)
#define HL_API __attribute__((visibility("default")))
#else
#define HL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The CLI maps them to exit codes: config errors exit 2,
 * numerical and domain failures exit 3. */
typedef enum hl_status {
  HL_OK = 0,
  HL_CHECK_FAILED = 1,
  HL_CONFIG_ERROR = 2,
  HL_NUMERICAL_ERROR = 3,
  HL_DOMAIN_ERROR = 4,
  HL_OUT_OF_RANGE = 5,
  HL_INVALID_ARGUMENT = 6,
  HL_INTERNAL_ERROR = 7
} hl_status;

typedef struct hl_model hl_model;

HL_API const char *hl_version(void);

/* Message of the last failing call on this thread ("" if none). */
HL_API const char *hl_last_error(void);

HL_API const char *hl_status_name(hl_status status);

/* Models. d <= alpha gives a recurrent stable model without a Green
 * function; the scale functions then return HL_DOMAIN_ERROR. */
HL_API hl_status hl_model_stable(int dim, double alpha, hl_model **out);
HL_API hl_status hl_model_brownian(int dim, hl_model **out);
/* Two-column "radius value" scale file. */
HL_API hl_status hl_model_tabulated(int dim, const char *scale_file, hl_model **out);
HL_API void hl_model_free(hl_model *model);

HL_API int hl_model_dim(const hl_model *model);
HL_API int hl_model_has_green(const hl_model *model);

/* Points are arrays of hl_model_dim doubles. */
HL_API hl_status hl_green(const hl_model *model, const double *x, const double *y, double *out);
HL_API hl_status hl_poisson_kernel(const hl_model *model, const double *center, double radius,
                                   const double *x, const double *z, double *out);
HL_API hl_status hl_ball_green(const hl_model *model, const double *center, double radius,
                               const double *x, const double *y, double *out);

HL_API hl_status hl_scale_value(const hl_model *model, double r, double *out);
HL_API hl_status hl_scale_invert(const hl_model *model, double value, double *out);
/* Number of violated invariants on the default grid (0: valid). */
HL_API hl_status hl_scale_verify(const hl_model *model, size_t *violations);

typedef struct hl_capacity_result {
  double capacity;
  double duality_gap;
  double slack;
  double lower_bound;
  double upper_bound;
  size_t n_points;
} hl_capacity_result;

/* Equilibrium LP for the ball B(center, radius); bounds use c0. */
HL_API hl_status hl_ball_capacity(const hl_model *model, const double *center, double radius,
                                  int n_points, double c0, hl_capacity_result *out);

typedef struct hl_constants {
  double eta, alpha, beta, gamma, kappa;
  int64_t j0;
  int m0, m1;
  double K;
} hl_constants;

HL_API hl_status hl_build_constants(const hl_model *model, double c0, double cJ, double R1,
                                    hl_constants *out);

typedef struct hl_estimate {
  double mean;
  double std_error;
  int64_t n;
  int64_t censored;
} hl_estimate;

/* P^x[hit B(center, target_radius) before leaving B(center, domain_radius)]. */
HL_API hl_status hl_hitting_probability(const hl_model *model, const double *center,
                                        double target_radius, double domain_radius,
                                        const double *x, int64_t n, uint64_t seed, int threads,
                                        hl_estimate *out);

typedef struct hl_run_options {
  int has_seed; /* nonzero: seed replaces [mc] seed */
  uint64_t seed;
  int threads;          /* > 0 replaces [mc] threads */
  const char *format;   /* "json" | "csv"; NULL keeps [output] format */
  const char *out_path; /* NULL keeps [output] path */
} hl_run_options;

typedef struct hl_run_output {
  char *json;   /* JSON document */
  char *csv;    /* CSV table, NULL when the subcommand has none */
  char *format; /* resolved output format */
  char *path;   /* resolved output path, "" for standard output */
} hl_run_output;

/* Runs a subcommand on INI config text. `source` names the text in
 * diagnostics and locates relative scale files (may be NULL); `options` may
 * be NULL. Returns HL_OK when the checks pass and HL_CHECK_FAILED when they
 * ran but failed; `out` is filled in both cases and must be released with
 * hl_run_output_free. */
HL_API hl_status hl_run(const char *subcommand, const char *config_text, const char *source,
                        const hl_run_options *options, hl_run_output *out);
HL_API void hl_run_output_free(hl_run_output *out);

/* The documented reference configuration. */
HL_API hl_status hl_default_config(char **out);

HL_API void hl_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif
