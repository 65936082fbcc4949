/*
 * qlc - robust linear classification under label noise via clipped square
 * loss, trained either by compiling to a quadratic binary program (QUBO)
 * or by classical descent baselines.
 *
 * All functions returning qlc_status report failure details through
 * qlc_last_error() (thread-local).  Handles are opaque; every *_free is
 * safe on NULL.  Strings returned through char** out-parameters are
 * heap-allocated and must be released with qlc_string_free.
 */
#ifndef QLC_H
#define QLC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QLC_API __attribute__((visibility("default")))

typedef enum qlc_status {
  QLC_OK = 0,
  QLC_ERR_INVALID_ARGUMENT = 1,
  QLC_ERR_DOMAIN = 2,
  QLC_ERR_PARSE = 3,
  QLC_ERR_IO = 4,
  QLC_ERR_CAPACITY = 5,
  QLC_ERR_ENCODING = 6,
  QLC_ERR_OPTIMIZATION = 7,
  QLC_ERR_INTERNAL = 8
} qlc_status;

QLC_API const char* qlc_version(void);
QLC_API const char* qlc_last_error(void);
QLC_API void qlc_string_free(char* s);

/* ---- losses (margin m = y * (w.x + b)) ---------------------------------- */

/* min((1-q)^2, max(0, 1-m)^2), q <= 0 */
QLC_API qlc_status qlc_q_loss(double margin, double q, double* out);
/* (m-t)^2 + (1-q)^2 * [t < 1]; minimizing over t recovers qlc_q_loss */
QLC_API qlc_status qlc_variational_bound(double margin, double t, double q, double* out);
QLC_API qlc_status qlc_t_star(double margin, double q, double* out);
/* differentiable surrogates: square, logistic, smoothed_hinge, sigmoid, probit */
QLC_API qlc_status qlc_baseline_loss(const char* loss, double margin, double* value,
                                     double* derivative);

/* Smallest safe q under one-class noise: 1 - 1/sqrt(beta - 2 beta nu + nu),
 * floored at floor_value when the bound is unbounded below. */
QLC_API qlc_status qlc_q_lower_bound(double beta, double nu, double floor_value, double* out);
/* count equally spaced values from bound to 0 inclusive, ascending; writes at
 * most count values (exact duplicates collapse) and the actual number. */
QLC_API qlc_status qlc_q_grid(double bound, int count, double* out, int* out_count);
/* 1/lambda; infinity at lambda = 0 */
QLC_API qlc_status qlc_weight_halfwidth(double lambda, double* out);

/* ---- datasets ----------------------------------------------------------- */

typedef struct qlc_dataset qlc_dataset;

QLC_API qlc_status qlc_dataset_load(const char* path, qlc_dataset** out);
/* name: long_servedio | mease_wyner */
QLC_API qlc_status qlc_dataset_generate(const char* name, int n, uint64_t seed, qlc_dataset** out);
QLC_API qlc_status qlc_dataset_save(const qlc_dataset* ds, const char* path);
QLC_API qlc_status qlc_dataset_write_manifest(const qlc_dataset* ds, const char* name,
                                              const char* source, const char* path);
/* flips labels of target_class to the opposite class w.p. rate in [0, 0.5) */
QLC_API qlc_status qlc_dataset_inject_noise(const qlc_dataset* ds, double rate, int target_class,
                                            uint64_t seed, qlc_dataset** out);
QLC_API int qlc_dataset_size(const qlc_dataset* ds);
QLC_API int qlc_dataset_features(const qlc_dataset* ds);
QLC_API void qlc_dataset_free(qlc_dataset* ds);

/* ---- parameter blocks --------------------------------------------------- */

typedef struct qlc_encoding_params {
  int d_w;           /* bits per weight */
  int d_b;           /* bits for the bias, -1: same as d_w */
  int d_t;           /* bits per slack variable */
  double alpha_w;    /* weight interval width, -1: min(2/lambda, alpha_cap) */
  double alpha_b;    /* bias interval width, -1: same as alpha_w */
  double alpha_t;    /* slack interval width, -1: 2*(2+|q|) */
  double alpha_cap;  /* cap on derived interval widths */
} qlc_encoding_params;

QLC_API qlc_encoding_params qlc_encoding_params_default(void);

typedef struct qlc_solver_params {
  int use_brute_force;    /* 0: tabu search, 1: exhaustive (<= 30 vars) */
  int64_t max_iterations; /* -1: 2000 * n_vars */
  int tenure;             /* -1: max(7, n_vars/10) */
  int restarts;           /* -1: spend the budget, max_iterations/stall_limit - 1 */
  int64_t stall_limit;    /* -1: 100 * n_vars */
  uint64_t seed;
  int n_runs;             /* independent tabu starts (seed, seed+1, ...) */
  int n_workers;          /* threads for the runs; never changes the result */
  int record_trace;
} qlc_solver_params;

QLC_API qlc_solver_params qlc_solver_params_default(void);

/* ---- quadratic binary problems ------------------------------------------ */

typedef struct qlc_qubo qlc_qubo;

QLC_API qlc_status qlc_qubo_compile(const qlc_dataset* ds, double q, double lambda,
                                    const qlc_encoding_params* enc, qlc_qubo** out);
QLC_API qlc_status qlc_qubo_load(const char* path, qlc_qubo** out);
QLC_API qlc_status qlc_qubo_save(const qlc_qubo* p, const char* path);
QLC_API int qlc_qubo_n_vars(const qlc_qubo* p);
QLC_API qlc_status qlc_qubo_constant_offset(const qlc_qubo* p, double* out);
QLC_API qlc_status qlc_qubo_energy(const qlc_qubo* p, const uint8_t* bits, int n_bits,
                                   double* out);
QLC_API void qlc_qubo_free(qlc_qubo* p);

typedef struct qlc_solve_result qlc_solve_result;

QLC_API qlc_status qlc_qubo_solve(const qlc_qubo* p, const qlc_solver_params* params,
                                  qlc_solve_result** out);
QLC_API qlc_status qlc_solve_result_energy(const qlc_solve_result* r, double* out);
QLC_API qlc_status qlc_solve_result_objective(const qlc_solve_result* r, double* out);
QLC_API qlc_status qlc_solve_result_bits(const qlc_solve_result* r, const uint8_t** bits,
                                         int* n_bits);
QLC_API qlc_status qlc_solve_result_save(const qlc_solve_result* r, const char* path);
QLC_API qlc_status qlc_solve_result_save_trace(const qlc_solve_result* r, const char* path);
QLC_API void qlc_solve_result_free(qlc_solve_result* r);

/* ---- training ----------------------------------------------------------- */

typedef struct qlc_model qlc_model;
typedef struct qlc_train_result qlc_train_result;

/* method: qloss | qloss_bcd | square | logistic | smoothed_hinge | sigmoid |
 * probit.  enc and solver may be NULL for defaults; both are ignored by the
 * descent methods. */
QLC_API qlc_status qlc_train(const qlc_dataset* ds, const char* method, double q, double lambda,
                             const qlc_encoding_params* enc, const qlc_solver_params* solver,
                             qlc_train_result** out);
QLC_API qlc_status qlc_train_result_objective(const qlc_train_result* r, double* out);
QLC_API qlc_status qlc_train_result_train_error(const qlc_train_result* r, double* out);
QLC_API qlc_status qlc_train_result_n_flagged(const qlc_train_result* r, int64_t* out);
QLC_API qlc_status qlc_train_result_model(const qlc_train_result* r, qlc_model** out);
QLC_API qlc_status qlc_train_result_write_report(const qlc_train_result* r, const char* path);
QLC_API void qlc_train_result_free(qlc_train_result* r);

QLC_API qlc_status qlc_model_load(const char* path, qlc_model** out);
QLC_API qlc_status qlc_model_save(const qlc_model* m, const char* path);
/* x: dense feature vector of length n (must equal the model dimension) */
QLC_API qlc_status qlc_model_predict(const qlc_model* m, const double* x, int n, int* out);
QLC_API qlc_status qlc_model_test_error(const qlc_model* m, const qlc_dataset* ds, double* out);
QLC_API void qlc_model_free(qlc_model* m);

/* ---- noise sweep -------------------------------------------------------- */

typedef struct qlc_sweep qlc_sweep;

QLC_API qlc_status qlc_sweep_create(qlc_sweep** out);
QLC_API qlc_status qlc_sweep_set_generator(qlc_sweep* s, const char* name, int n, uint64_t seed);
QLC_API qlc_status qlc_sweep_set_dataset_path(qlc_sweep* s, const char* path);
QLC_API qlc_status qlc_sweep_set_methods(qlc_sweep* s, const char* comma_separated);
QLC_API qlc_status qlc_sweep_set_noise_levels(qlc_sweep* s, const double* levels, int count);
QLC_API qlc_status qlc_sweep_set_lambda_grid(qlc_sweep* s, const double* values, int count);
QLC_API qlc_status qlc_sweep_set_q_grid(qlc_sweep* s, int count, double floor_value);
QLC_API qlc_status qlc_sweep_set_folds(qlc_sweep* s, int folds);
QLC_API qlc_status qlc_sweep_set_test_fraction(qlc_sweep* s, double fraction);
QLC_API qlc_status qlc_sweep_set_beta_override(qlc_sweep* s, double beta);
QLC_API qlc_status qlc_sweep_set_encoding(qlc_sweep* s, const qlc_encoding_params* enc);
QLC_API qlc_status qlc_sweep_set_solver(qlc_sweep* s, const qlc_solver_params* params);
QLC_API qlc_status qlc_sweep_set_gd(qlc_sweep* s, int max_iters, double tol);
QLC_API qlc_status qlc_sweep_set_bcd_rounds(qlc_sweep* s, int max_rounds);
QLC_API qlc_status qlc_sweep_set_noise_target(qlc_sweep* s, int target_class);
QLC_API qlc_status qlc_sweep_set_seed(qlc_sweep* s, uint64_t seed);
QLC_API qlc_status qlc_sweep_set_workers(qlc_sweep* s, int workers);
QLC_API qlc_status qlc_sweep_set_out_dir(qlc_sweep* s, const char* dir);
/* Runs the full protocol and writes artifacts to the output directory.
 * Per-cell failures are recorded in errors.txt and reported through
 * any_cell_failed rather than failing the whole sweep. */
QLC_API qlc_status qlc_sweep_run(qlc_sweep* s, int* any_cell_failed);
QLC_API void qlc_sweep_free(qlc_sweep* s);

/* Paired two-sided t-test between two results.csv files; method selectors
 * may be NULL/empty when a file holds exactly one method. */
QLC_API qlc_status qlc_significance(const char* csv_path_a, const char* csv_path_b,
                                    const char* method_a, const char* method_b, double alpha,
                                    char** out_table);

#ifdef __cplusplus
}
#endif

#endif /* QLC_H */
