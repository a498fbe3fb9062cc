/*
 * Copyright 2026 The Protoselect Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libprotoselect.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a ps_status; on failure ps_last_error() holds a
 * message for the calling thread until its next failing call. Strings
 * returned through char** are heap-allocated and released with
 * ps_string_free.
 */

#ifndef PROTOSELECT_PROTOSELECT_H_
#define PROTOSELECT_PROTOSELECT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PS_API __declspec(dllexport)
#else
#define PS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
  PS_OK = 0,
  PS_ERROR_INPUT = 1,
  PS_ERROR_SOLVER = 2,
  PS_ERROR_GUARD = 3,
  PS_ERROR_NUMERIC = 4,
  PS_ERROR_DEGENERATE = 5,
  PS_ERROR_INTERNAL = 6
} ps_status;

typedef enum ps_kernel_family {
  PS_KERNEL_GAUSSIAN = 0,
  PS_KERNEL_LINEAR = 1
} ps_kernel_family;

typedef enum ps_method {
  PS_METHOD_PROTODASH = 0,
  PS_METHOD_PROTOGREEDY = 1,
  PS_METHOD_L2C_EQUAL = 2,
  PS_METHOD_L2C_ADAPTED = 3,
  PS_METHOD_RANDOM_W = 4
} ps_method;

typedef struct ps_dataset ps_dataset;
typedef struct ps_problem ps_problem;
typedef struct ps_selection ps_selection;
typedef struct ps_ranking ps_ranking;

typedef struct ps_kernel_spec {
  ps_kernel_family family;
  double bandwidth; /* gaussian sigma */
  double jitter;    /* added to the Gram diagonal */
} ps_kernel_spec;

typedef struct ps_select_config {
  ps_method method;
  size_t m;            /* sparsity; used unless use_epsilon != 0 */
  double epsilon;      /* minimum objective increase */
  int use_epsilon;
  uint64_t seed;       /* RandomW draws */
  size_t oversample;   /* select oversample*m, keep the m heaviest */
  double kkt_tolerance;
  size_t max_iterations; /* 0: 10|L| + 100 */
  size_t threads;
} ps_select_config;

typedef struct ps_verify_config {
  size_t instances;
  uint64_t seed;
  size_t max_n1;
  size_t max_n2;
  size_t max_m;
  double min_sigma;
  double max_sigma;
  int identity_kernel;
} ps_verify_config;

typedef struct ps_bench_row {
  size_t n1;
  size_t n2;
  size_t m;
  double t_dash;
  double t_greedy;
  double ratio; /* t_greedy / t_dash */
  double f_dash;
  double f_greedy;
} ps_bench_row;

/* Receives one JSON document (no trailing newline) per verified instance. */
typedef void (*ps_report_callback)(const char* json, void* user);

PS_API const char* ps_version(void);
PS_API const char* ps_last_error(void);
PS_API const char* ps_status_name(ps_status status);
PS_API void ps_string_free(char* text);

PS_API void ps_kernel_spec_default(ps_kernel_spec* spec);
PS_API void ps_select_config_default(ps_select_config* config);
PS_API void ps_verify_config_default(ps_verify_config* config);

/* Accepts dash, greedy, l2c, l2c-a, random (and the long names). */
PS_API ps_status ps_method_parse(const char* name, ps_method* out);
PS_API const char* ps_method_name(ps_method method);

/* ---- datasets ---------------------------------------------------------- */

PS_API ps_status ps_dataset_load_csv(const char* path, int has_header,
                                     ps_dataset** out);
/* values is row-major rows x cols. */
PS_API ps_status ps_dataset_from_values(const double* values, size_t rows,
                                        size_t cols, ps_dataset** out);
PS_API size_t ps_dataset_rows(const ps_dataset* dataset);
PS_API size_t ps_dataset_cols(const ps_dataset* dataset);
/* Z-scores columns in place with statistics pooled over all sets. */
PS_API ps_status ps_dataset_standardize(ps_dataset* const* sets, size_t count);
/* Median pairwise distance over the rows of all given sets together. */
PS_API ps_status ps_median_bandwidth(const ps_dataset* const* sets,
                                     size_t count, double* out);
PS_API void ps_dataset_free(ps_dataset* dataset);

/* ---- problems: Gram matrix over the source, mean map of the target ----- */

PS_API ps_status ps_problem_create(const ps_dataset* target,
                                   const ps_dataset* source,
                                   const ps_kernel_spec* spec, size_t threads,
                                   ps_problem** out);
/* kernel is n2 x n2 row-major and must be exactly symmetric. */
PS_API ps_status ps_problem_from_matrices(const double* kernel,
                                          const double* mean_map, size_t n2,
                                          ps_problem** out);
PS_API size_t ps_problem_size(const ps_problem* problem);
PS_API void ps_problem_free(ps_problem* problem);

/* ---- selection ---------------------------------------------------------- */

/* On PS_ERROR_SOLVER, *out (if non-null) holds the partial result. */
PS_API ps_status ps_select(const ps_problem* problem,
                           const ps_select_config* config, ps_selection** out);
/* Keeps the m heaviest prototypes and re-solves their weights. */
PS_API ps_status ps_selection_truncate(const ps_problem* problem,
                                       const ps_selection* selection, size_t m,
                                       ps_selection** out);
PS_API size_t ps_selection_size(const ps_selection* selection);
PS_API ps_status ps_selection_indices(const ps_selection* selection,
                                      size_t* out, size_t capacity);
PS_API ps_status ps_selection_weights(const ps_selection* selection,
                                      double* out, size_t capacity);
PS_API double ps_selection_objective(const ps_selection* selection);
PS_API int ps_selection_stopped_early(const ps_selection* selection);
PS_API ps_status ps_selection_to_json(const ps_selection* selection,
                                      char** json);
PS_API ps_status ps_selection_timings_json(const ps_selection* selection,
                                           char** json);
PS_API ps_status ps_criticisms_json(const ps_problem* problem,
                                    const ps_selection* selection,
                                    size_t count, char** json);
PS_API void ps_selection_free(ps_selection* selection);

/* ---- cross-dataset ranking ---------------------------------------------- */

PS_API ps_status ps_rank(const ps_dataset* const* sets,
                         const char* const* names, size_t count, size_t m,
                         const ps_kernel_spec* spec, int reweight,
                         size_t threads, ps_ranking** out);
PS_API ps_status ps_ranking_to_json(const ps_ranking* ranking, char** json);
PS_API ps_status ps_ranking_averages_json(const ps_ranking* ranking,
                                          char** json);
PS_API ps_status ps_ranking_to_dot(const ps_ranking* ranking, size_t top_t,
                                   char** dot);
PS_API ps_status ps_ranking_graph_json(const ps_ranking* ranking,
                                       size_t top_t, char** json);
PS_API void ps_ranking_free(ps_ranking* ranking);

/* ---- verification, benchmarks, bandwidth hook --------------------------- */

PS_API ps_status ps_verify_sweep(const ps_verify_config* config,
                                 ps_report_callback callback, void* user,
                                 size_t* violations, size_t* greedy_violations);
PS_API ps_status ps_bench_run(size_t n1, size_t n2, size_t m, size_t dim,
                              uint64_t seed, ps_bench_row* out);
PS_API ps_status ps_cv_report(const ps_dataset* target,
                              const ps_dataset* source,
                              const ps_kernel_spec* base, const double* sigmas,
                              size_t count, const ps_select_config* config,
                              double holdout_fraction, char** json);

#ifdef __cplusplus
}
#endif

#endif /* PROTOSELECT_PROTOSELECT_H_ */
