#ifndef ARCWEAVE_H
#define ARCWEAVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define AW_API __declspec(dllexport)
#else
#define AW_API __attribute__((visibility("default")))
#endif

/* Status codes. Every fallible call returns one; the message of the last
   failure on the calling thread is available from aw_last_error(). */
typedef enum aw_status {
    AW_OK = 0,
    AW_E_INVALID_ARGUMENT = 1,
    AW_E_CENTER_MISMATCH,
    AW_E_ORDER_MISMATCH,
    AW_E_DIVISION_BY_SINGULAR,
    AW_E_BRANCH_AT_SINGULARITY,
    AW_E_SEED_INCONSISTENT,
    AW_E_INNER_NOT_CENTERED,
    AW_E_NOT_LOCALLY_INVERTIBLE,
    AW_E_STEP_EXCEEDS_RADIUS,
    AW_E_NON_REAL_CENTER,
    AW_E_PARSE,
    AW_E_SINGULAR_AT_CENTER,
    AW_E_BRANCH_JUMP,
    AW_E_UNKNOWN_BUILTIN,
    AW_E_ZERO_DERIVATIVE,
    AW_E_OBSTRUCTION,
    AW_E_DRIFT,
    AW_E_QUADRATURE,
    AW_E_TOO_FEW_SAMPLES,
    AW_E_DEGENERATE,
    AW_E_MALFORMED_TRACE,
    AW_E_IO,
    AW_E_INTERNAL = 99
} aw_status;

typedef enum aw_side { AW_SIDE_A = 0, AW_SIDE_B = 1 } aw_side;

typedef enum aw_classification {
    AW_INFINITE = 0,
    AW_FINITE_OBSTRUCTION,
    AW_PERIODIC,
    AW_BUDGET_EXHAUSTED
} aw_classification;

typedef enum aw_limit_kind { AW_LIMIT_POINT = 0, AW_LIMIT_INFINITY, AW_LIMIT_CIRCLE, AW_LIMIT_UNKNOWN } aw_limit_kind;

typedef enum aw_length_verdict { AW_CONVERGENT = 0, AW_DIVERGENT_POWER, AW_DIVERGENT_LOG } aw_length_verdict;

typedef struct aw_curve aw_curve;
typedef struct aw_run aw_run;

typedef struct aw_controls {
    int order;
    double step_fraction;
    double drift_tol;
    double min_step;
    double s_budget;
    long long max_steps;
    double max_step;
    double truncation_tol;
    double period_tol;
    int detect_period;
    int reanchor_every;
    int keep_jets;
} aw_controls;

typedef struct aw_limit_set {
    int kind; /* aw_limit_kind */
    double point_re, point_im;
    double center_re, center_im;
    double radius;
    double residual;
} aw_limit_set;

typedef struct aw_endpoint {
    int side;           /* aw_side */
    int classification; /* aw_classification */
    double s_bound;     /* +-inf when unbounded */
    double ratio;
    int has_period;
    double period;
    aw_limit_set limit_set;
    long long steps;
    double max_unit_speed_err;
} aw_endpoint;

typedef struct aw_sample {
    double s, re, im, step, radius_est, unit_speed_err, curvature;
} aw_sample;

typedef struct aw_length_fit {
    int verdict; /* aw_length_verdict */
    double exponent;
    double increment_exponent;
    double log_r2;
} aw_length_fit;

AW_API const char* aw_version(void);
AW_API const char* aw_last_error(void);
/* 0-based offset of the last parse failure on this thread, -1 if none. */
AW_API long aw_last_parse_position(void);
AW_API const char* aw_status_name(aw_status status);
AW_API const char* aw_classification_name(int classification);
AW_API const char* aw_limit_kind_name(int kind);
AW_API const char* aw_length_verdict_name(int verdict);

/* "error", "info" or "debug"; logging goes to stderr. */
AW_API aw_status aw_set_log_level(const char* level);

/* Strings returned through char** are heap copies owned by the caller. */
AW_API void aw_string_free(char* s);

AW_API void aw_controls_default(aw_controls* out);

/* Expression with an optional second line "domain: <lo> <hi>". */
AW_API aw_status aw_curve_parse(const char* text, aw_curve** out);
AW_API aw_status aw_curve_builtin(const char* name, double tau, int has_tau, aw_curve** out);
AW_API aw_status aw_curve_domain(const aw_curve* curve, double* lo, double* hi);
AW_API aw_status aw_curve_eval(const aw_curve* curve, double t, double* re, double* im);
AW_API aw_status aw_curve_expression(const aw_curve* curve, char** out);
AW_API void aw_curve_free(aw_curve* curve);

/* Continues from t0 in both directions. With scan_critical set, the report
   also lists the critical points of the curve near t0. */
AW_API aw_status aw_continue(const aw_curve* curve, double t0, const aw_controls* controls, int scan_critical,
                             aw_run** out);
AW_API aw_status aw_run_endpoint(const aw_run* run, int side, aw_endpoint* out);
AW_API aw_status aw_run_trace_size(const aw_run* run, int side, size_t* count);
/* Copies up to `capacity` samples. */
AW_API aw_status aw_run_trace(const aw_run* run, int side, aw_sample* buffer, size_t capacity);
AW_API aw_status aw_run_trace_csv(const aw_run* run, int side, char** out);
AW_API aw_status aw_run_report_json(const aw_run* run, char** out);
AW_API void aw_run_free(aw_run* run);

/* Parses a report and serializes it again. */
AW_API aw_status aw_report_normalize(const char* json, char** out);

AW_API aw_status aw_trace_count(const char* csv, size_t* count);
AW_API aw_status aw_trace_parse(const char* csv, aw_sample* buffer, size_t capacity);
AW_API aw_status aw_classify_csv(const char* csv, aw_limit_set* out);
AW_API aw_status aw_render_svg(const char* csv, char** out);

/* Writes up to `capacity` zeros of gamma' inside [lo, hi]; *count receives
   the number found. */
AW_API aw_status aw_critical_scan(const aw_curve* curve, double lo, double hi, int grid, double* t,
                                  double* residual, size_t capacity, size_t* count);
/* lengths[k] = arc length over [lo + eps[k], hi]. */
AW_API aw_status aw_length_quadrature(const aw_curve* curve, double lo, double hi, const double* eps, size_t n,
                                      double* lengths, aw_length_fit* fit);

AW_API size_t aw_examples_count(void);
AW_API aw_status aw_examples_table_json(char** out);
/* Runs one example; *row receives its results as JSON. */
AW_API aw_status aw_example_run(size_t index, char** row, int* matched);
/* Runs one row in the format of aw_examples_table_json. */
AW_API aw_status aw_example_run_case(const char* case_json, char** row, int* matched);

#ifdef __cplusplus
}
#endif

#endif
