// Copyright 2026 The recipebo Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

/*
 * C interface to recipebo. Every object is an opaque handle created by a
 * function returning rbo_status and released by the matching *_free. On any
 * status other than RBO_OK, rbo_last_error() describes the failure (per
 * thread) and output handles are left untouched.
 */
#ifndef RECIPEBO_RECIPEBO_H
#define RECIPEBO_RECIPEBO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RBO_API __declspec(dllexport)
#else
#define RBO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbo_status {
  RBO_OK = 0,
  RBO_ERR_INVALID = 1,   /* malformed config, bad arguments, violated precondition */
  RBO_ERR_NUMERICAL = 2, /* factorization failure, non-finite objective */
  RBO_ERR_IO = 3,
  RBO_ERR_INTERNAL = 4
} rbo_status;

typedef struct rbo_space rbo_space;
typedef struct rbo_benchmark rbo_benchmark;
typedef struct rbo_dataset rbo_dataset;
typedef struct rbo_svr rbo_svr;
typedef struct rbo_trace rbo_trace;
typedef struct rbo_experiment rbo_experiment;
typedef struct rbo_report rbo_report;

RBO_API const char* rbo_version(void);
RBO_API const char* rbo_last_error(void);
RBO_API const char* rbo_status_name(rbo_status status);

/* Search spaces -------------------------------------------------------- */

RBO_API rbo_status rbo_space_load(const char* path, rbo_space** out);
RBO_API rbo_status rbo_space_from_json(const char* json_text, rbo_space** out);
RBO_API size_t rbo_space_variable_count(const rbo_space* space);
RBO_API size_t rbo_space_latent_dim(const rbo_space* space);
RBO_API void rbo_space_free(rbo_space* space);

/* Validates a space or benchmark config file (rules, expert point and
 * targets are checked when present). Either count pointer may be NULL. */
RBO_API rbo_status rbo_config_validate(const char* path, size_t* variable_count, size_t* latent_dim);

/* Benchmarks ------------------------------------------------------------ */

/* name: "hotdog" or "cesar" */
RBO_API rbo_status rbo_benchmark_builtin(const char* name, rbo_benchmark** out);
RBO_API rbo_status rbo_benchmark_load(const char* path, rbo_benchmark** out);
RBO_API rbo_status rbo_benchmark_save(const rbo_benchmark* bench, const char* path);
RBO_API rbo_status rbo_benchmark_space(const rbo_benchmark* bench, rbo_space** out);
RBO_API void rbo_benchmark_free(rbo_benchmark* bench);

/* Datasets -------------------------------------------------------------- */

typedef struct rbo_dataset_options {
  size_t n_sim;       /* simulated rows, one draw each */
  size_t jury_size;   /* evaluators per grid point */
  size_t grid_points; /* cap on grid rows; 0 keeps the full grid */
} rbo_dataset_options;

RBO_API void rbo_dataset_options_default(rbo_dataset_options* options);
RBO_API rbo_status rbo_dataset_simulate(const rbo_benchmark* bench, const rbo_dataset_options* options, uint64_t seed,
                                        rbo_dataset** out);
RBO_API rbo_status rbo_dataset_load_real(const char* path, const rbo_space* space, rbo_dataset** out);
RBO_API rbo_status rbo_dataset_save_csv(const rbo_dataset* data, const char* path);
RBO_API size_t rbo_dataset_size(const rbo_dataset* data);
RBO_API size_t rbo_dataset_real_count(const rbo_dataset* data);
RBO_API void rbo_dataset_free(rbo_dataset* data);

/* Surrogate ------------------------------------------------------------- */

typedef struct rbo_surrogate_options {
  const double* C_grid; /* NULL selects the default grid */
  size_t C_count;
  const double* gamma_grid; /* NULL selects the default grid */
  size_t gamma_count;
  double epsilon_tube;
  size_t folds;
} rbo_surrogate_options;

typedef struct rbo_surrogate_summary {
  double C;
  double gamma;
  double epsilon_tube;
  double cv_rmse;
  double cv_mse;
  size_t support_vectors;
  int converged;
} rbo_surrogate_summary;

RBO_API void rbo_surrogate_options_default(rbo_surrogate_options* options);
/* Grid-search cross-validation, then a fit on the full dataset. summary may be NULL. */
RBO_API rbo_status rbo_surrogate_fit(const rbo_dataset* data, const rbo_surrogate_options* options, uint64_t seed,
                                     rbo_svr** out, rbo_surrogate_summary* summary);
RBO_API rbo_status rbo_svr_save(const rbo_svr* model, const char* path);
RBO_API rbo_status rbo_svr_load(const char* path, rbo_svr** out);
RBO_API rbo_status rbo_svr_predict(const rbo_svr* model, const double* latent, size_t length, double* out);
RBO_API void rbo_svr_free(rbo_svr* model);

/* Optimization ----------------------------------------------------------- */

typedef enum rbo_method { RBO_METHOD_BO = 0, RBO_METHOD_RANDOM_SEARCH = 1 } rbo_method;

typedef struct rbo_optimize_options {
  size_t budget;
  size_t n_init;
  size_t grid_size;
  size_t local_steps;
  size_t n_gp_samples;
  int optimize_hyperparams; /* 0: slice-sample and average, 1: single ML fit */
} rbo_optimize_options;

/* Objective over snapped unit-cube coordinates (length = latent dim). */
typedef double (*rbo_objective_fn)(const double* latent, size_t length, void* user);

RBO_API void rbo_optimize_options_default(rbo_optimize_options* options);
RBO_API rbo_status rbo_optimize_svr(const rbo_space* space, const rbo_svr* model, const rbo_optimize_options* options,
                                    rbo_method method, uint64_t seed, rbo_trace** out);
RBO_API rbo_status rbo_optimize_fn(const rbo_space* space, rbo_objective_fn objective, void* user,
                                   const rbo_optimize_options* options, rbo_method method, uint64_t seed,
                                   rbo_trace** out);
RBO_API size_t rbo_trace_size(const rbo_trace* trace);
RBO_API rbo_status rbo_trace_best(const rbo_trace* trace, double* quality, size_t* iteration);
/* JSON object of the recommended point; the string is owned by the trace. */
RBO_API const char* rbo_trace_recommendation_json(const rbo_trace* trace);
RBO_API rbo_status rbo_trace_save_csv(const rbo_trace* trace, const char* path);
RBO_API void rbo_trace_free(rbo_trace* trace);

/* Experiments ------------------------------------------------------------ */

typedef void (*rbo_progress_fn)(size_t done, size_t total, void* user);

RBO_API rbo_status rbo_experiment_default(const char* benchmark_name, rbo_experiment** out);
RBO_API rbo_status rbo_experiment_load(const char* path, rbo_experiment** out);
RBO_API rbo_status rbo_experiment_set_benchmark(rbo_experiment* exp, const rbo_benchmark* bench);
RBO_API rbo_status rbo_experiment_set_seed(rbo_experiment* exp, uint64_t seed);
RBO_API rbo_status rbo_experiment_set_replications(rbo_experiment* exp, size_t replications);
RBO_API rbo_status rbo_experiment_set_iterations(rbo_experiment* exp, size_t iterations);
RBO_API rbo_status rbo_experiment_set_threads(rbo_experiment* exp, size_t threads);
RBO_API rbo_status rbo_experiment_run(const rbo_experiment* exp, rbo_progress_fn progress, void* user,
                                      rbo_report** out);
RBO_API void rbo_experiment_free(rbo_experiment* exp);

RBO_API rbo_status rbo_report_export(const rbo_report* report, const char* out_dir, int record_timing);
RBO_API rbo_status rbo_report_load(const char* path, rbo_report** out);
RBO_API rbo_status rbo_report_final_means(const rbo_report* report, double* bo, double* random_search,
                                          double* expert);
RBO_API double rbo_report_wall_time(const rbo_report* report);
RBO_API void rbo_report_free(rbo_report* report);

#ifdef __cplusplus
}
#endif

#endif /* RECIPEBO_RECIPEBO_H */
