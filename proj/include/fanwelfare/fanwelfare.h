#ifndef FANWELFARE_H
#define FANWELFARE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FANWELFARE_BUILDING)
#define FW_API __declspec(dllexport)
#else
#define FW_API __declspec(dllimport)
#endif
#else
#define FW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fw_status {
  FW_OK = 0,
  FW_ERR_NEGATIVE_ENTRY = 1,
  FW_ERR_NON_FINITE_ENTRY = 2,
  FW_ERR_EMPTY_VECTOR = 3,
  FW_ERR_INVALID_LEVEL = 4,
  FW_ERR_INVALID_FAN = 5,
  FW_ERR_MAX_ITER_EXCEEDED = 6,
  FW_ERR_DIMENSION_MISMATCH = 7,
  FW_ERR_DOMAIN = 8,
  FW_ERR_INFEASIBLE_POLICY = 9,
  FW_ERR_NOT_APPLICABLE = 10,
  FW_ERR_INVALID_ARGUMENT = 11,
  FW_ERR_PARSE = 12,
  FW_ERR_IO = 13,
  FW_ERR_NULL_ARGUMENT = 14,
  FW_ERR_INTERNAL = 15
} fw_status;

typedef enum fw_preference { FW_X_PREFERRED = 0, FW_Y_PREFERRED = 1, FW_INDIFFERENT = 2 } fw_preference;

typedef enum fw_method { FW_METHOD_ITERATION = 0, FW_METHOD_BISECTION = 1, FW_METHOD_CLOSED_FORM = 2 } fw_method;

typedef enum fw_region { FW_FAIR_OPTIMAL = 0, FW_EFFICIENT_OPTIMAL = 1, FW_CRISIS_EFFICIENT = 2 } fw_region;

/* Message of the last failed call on this thread; "" after a success. */
FW_API const char* fw_last_error(void);
FW_API const char* fw_status_name(fw_status status);
FW_API const char* fw_preference_name(fw_preference pref);
FW_API const char* fw_method_name(fw_method method);
FW_API const char* fw_region_name(fw_region region);

/* Frees any string returned through a char** out-parameter. */
FW_API void fw_string_free(char* s);

/* ---- fans ---- */

typedef struct fw_fan fw_fan;

/* Shorthand (utilitarian, rawlsian, contamination:<rho>, step:<c*>,
   file:<path>) or inline JSON. */
FW_API fw_status fw_fan_parse(const char* text, fw_fan** out);
FW_API fw_status fw_fan_to_json(const fw_fan* fan, char** out);
FW_API fw_status fw_fan_family(const fw_fan* fan, char** out);
/* 0 when the fan works in any dimension. */
FW_API fw_status fw_fan_dimension(const fw_fan* fan, size_t* out);
FW_API void fw_fan_free(fw_fan* fan);

/* ---- solver ---- */

typedef struct fw_solver_config {
  double tol_abs;
  int max_iter;
  double v_upper_factor;
} fw_solver_config;

FW_API void fw_solver_config_default(fw_solver_config* cfg);

typedef struct fw_welfare_result {
  double value;
  double residual;
  int iterations;
  fw_method method;
} fw_welfare_result;

/* witness may be NULL; otherwise it receives n weights. */
FW_API fw_status fw_support_min(const fw_fan* fan, double v, const double* x, size_t n, double* value,
                                double* witness);

/* cfg may be NULL for defaults; witness may be NULL. */
FW_API fw_status fw_welfare(const fw_fan* fan, const double* x, size_t n, const fw_solver_config* cfg,
                            fw_welfare_result* out, double* witness);

/* {value, witness, residual, iterations, method} at 12 significant digits. */
FW_API fw_status fw_welfare_json(const fw_fan* fan, const double* x, size_t n, const fw_solver_config* cfg,
                                 char** out);

FW_API fw_status fw_welfare_closed_form_identity(const double* x, size_t n, double* out);

FW_API fw_status fw_rank(const fw_fan* fan, const double* x, const double* y, size_t n, const fw_solver_config* cfg,
                         fw_preference* out);

/* ---- axioms ---- */

typedef struct fw_axiom_options {
  uint64_t seed;
  int trials;
  double scale;
  const size_t* dims; /* NULL for {2, 3, 5} */
  size_t n_dims;
} fw_axiom_options;

FW_API void fw_axiom_options_default(fw_axiom_options* opts);

/* JSON report; violations receives the total over all applicable axioms. */
FW_API fw_status fw_axioms_run(const fw_fan* fan, const fw_axiom_options* opts, const fw_solver_config* cfg,
                               char** report_json, int* violations);

/* ---- brute-force oracle ---- */

/* grid_m = 0 enumerates extreme points; otherwise a simplex grid of
   resolution grid_m supplies m_v. */
FW_API fw_status fw_oracle_brute_welfare(const fw_fan* fan, const double* x, size_t n, int v_resolution, int grid_m,
                                         double* out);

/* ---- triage ---- */

typedef struct fw_triage_model fw_triage_model;

/* NULL or "" gives the canonical model (L=0.1, H=0.5, gamma=2, rho=identity). */
FW_API fw_status fw_triage_from_json(const char* json, fw_triage_model** out);
FW_API fw_status fw_triage_to_json(const fw_triage_model* model, char** out);
/* *out is NULL when the parameters raise no warning. */
FW_API fw_status fw_triage_warning(const fw_triage_model* model, char** out);
/* Scenario (k, alpha) embedded in the JSON, if any; *has is 0 otherwise. */
FW_API fw_status fw_triage_scenario(const fw_triage_model* model, int* has, double* k, double* alpha);
FW_API void fw_triage_free(fw_triage_model* model);

FW_API fw_status fw_triage_fixed_point(const fw_triage_model* model, double a, double b, double tol, double* out);
FW_API fw_status fw_triage_alpha_star(const fw_triage_model* model, double k, double tol, double* out);

typedef struct fw_triage_eval {
  double mean_efficient;
  double min_efficient;
  double mean_fair;
  double min_fair;
  double v_efficient;
  double v_fair;
  double alpha_star;
  fw_region region;
} fw_triage_eval;

FW_API fw_status fw_triage_evaluate(const fw_triage_model* model, double k, double alpha, fw_triage_eval* out);

FW_API fw_status fw_triage_grid_csv(const fw_triage_model* model, double k_lo, double k_hi, double alpha_lo,
                                    double alpha_hi, int steps, char** csv);

FW_API fw_status fw_triage_lemma2(const fw_triage_model* model, double k, double alpha, double t_L, double t_H,
                                  double tol, int* holds);

/* ---- inequality ---- */

FW_API fw_status fw_atkinson_ede(const double* x, size_t n, double epsilon, double* out);

FW_API fw_status fw_homotheticity_report_csv(const fw_fan* fan, const double* x, const double* y, size_t n,
                                             const double* lambdas, size_t n_lambdas, double epsilon,
                                             const fw_solver_config* cfg, char** csv, int* atkinson_constant,
                                             int* fan_rank_flips);

#ifdef __cplusplus
}
#endif

#endif
