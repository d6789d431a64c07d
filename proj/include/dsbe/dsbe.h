/*
Copyright 2026 The dsbe Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef DSBE_H_
#define DSBE_H_

/*
 * C interface of libdsbe. All functions return a dsbe_status; on failure the
 * message of the last error on the calling thread is available through
 * dsbe_last_error(). Handles are opaque and owned by the caller, who releases
 * them with the matching *_destroy function (NULL is accepted).
 *
 * Matrices are passed column-major. Strings are returned through a caller
 * buffer: at most `capacity` bytes (including the terminating NUL) are
 * written and `*needed` receives the full size, so a call with capacity 0
 * queries the required length.
 */

#if defined(_WIN32)
  #if defined(DSBE_BUILDING_LIBRARY)
    #define DSBE_API __declspec(dllexport)
  #else
    #define DSBE_API __declspec(dllimport)
  #endif
#else
  #define DSBE_API __attribute__((visibility("default")))
#endif

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsbe_status
{
    DSBE_OK = 0,
    DSBE_ERR_CONFIG = 1,      /* invalid argument or configuration */
    DSBE_ERR_RUNTIME = 2,     /* numerical or internal failure */
    DSBE_ERR_IO = 3,          /* file could not be read or written */
    DSBE_ERR_NULL = 4,        /* required pointer argument was NULL */
} dsbe_status;

typedef struct dsbe_zonotope dsbe_zonotope;
typedef struct dsbe_config dsbe_config;
typedef struct dsbe_run dsbe_run;
typedef struct dsbe_bench dsbe_bench;

DSBE_API const char* dsbe_version(void);

/* Message of the last failed call on this thread; "" if none. */
DSBE_API const char* dsbe_last_error(void);

/* ---- zonotopes -------------------------------------------------------- */

/* `generators` is n x e column-major and may be NULL when e == 0. */
DSBE_API dsbe_status dsbe_zonotope_create(int n, int e, const double* center, const double* generators,
                                          dsbe_zonotope** out);
DSBE_API void dsbe_zonotope_destroy(dsbe_zonotope* z);

DSBE_API int dsbe_zonotope_dim(const dsbe_zonotope* z);
DSBE_API int dsbe_zonotope_num_generators(const dsbe_zonotope* z);

/* Copies the center (n values) and/or generators (n*e values); either may be NULL. */
DSBE_API dsbe_status dsbe_zonotope_get(const dsbe_zonotope* z, double* center, double* generators);

DSBE_API dsbe_status dsbe_zonotope_minkowski_sum(const dsbe_zonotope* a, const dsbe_zonotope* b, dsbe_zonotope** out);

/* L is rows x n column-major. */
DSBE_API dsbe_status dsbe_zonotope_linear_map(const double* L, int rows, const dsbe_zonotope* z, dsbe_zonotope** out);

DSBE_API dsbe_status dsbe_zonotope_reduce(const dsbe_zonotope* z, int q, dsbe_zonotope** out);
DSBE_API dsbe_status dsbe_zonotope_f_radius(const dsbe_zonotope* z, double* out);
DSBE_API dsbe_status dsbe_zonotope_contains(const dsbe_zonotope* z, const double* x, double tol, int* inside);

/*
 * Over-approximates the intersection of z with m strips {x : |h_j x - y_j| <= r_j}
 * using the F-radius optimal gain. H is m x n column-major.
 */
DSBE_API dsbe_status dsbe_zonotope_intersect_strips(const dsbe_zonotope* z, int m, const double* H, const double* y,
                                                    const double* r, dsbe_zonotope** out);

/* Over-approximates the intersection of m zonotopes with the optimal weights. */
DSBE_API dsbe_status dsbe_zonotope_intersect(int m, const dsbe_zonotope* const* zs, dsbe_zonotope** out);

/* ---- configuration ---------------------------------------------------- */

/* Defaults: sm, diffusion on, 4 neighbours, 8 nodes, 200 steps, seed 1, q 20. */
DSBE_API dsbe_status dsbe_config_create(dsbe_config** out);
DSBE_API void dsbe_config_destroy(dsbe_config* cfg);

/* Applies the keys of a JSON object on top of the current values. */
DSBE_API dsbe_status dsbe_config_apply_json(dsbe_config* cfg, const char* json);
DSBE_API dsbe_status dsbe_config_load_file(dsbe_config* cfg, const char* path);
DSBE_API dsbe_status dsbe_config_to_json(const dsbe_config* cfg, char* buffer, size_t capacity, size_t* needed);

/* ---- runs --------------------------------------------------------------- */

/* Simulates (or replays cfg's trajectory_file) and runs the observer network. */
DSBE_API dsbe_status dsbe_run_create(const dsbe_config* cfg, dsbe_run** out);
DSBE_API void dsbe_run_destroy(dsbe_run* run);

DSBE_API int dsbe_run_num_records(const dsbe_run* run);
DSBE_API int dsbe_run_num_violations(const dsbe_run* run);

/* metric: radius_m, center_err_m, hausdorff_m, radius_frobenius_m, radius_halfdiag_m. */
DSBE_API dsbe_status dsbe_run_summary(const dsbe_run* run, const char* metric, double* mean, double* std);

/* Writes records.csv, summary.csv, trajectory.csv and snapshots/ into dir. */
DSBE_API dsbe_status dsbe_run_write(const dsbe_run* run, const char* dir);

/*
 * Runs the 2 x 2 x 3 grid over cfg's seeds and writes grid_summary.csv into
 * dir. `violations` (optional) receives the total containment violations.
 */
DSBE_API dsbe_status dsbe_grid_run(const dsbe_config* cfg, const char* dir, int* violations);

/* ---- benchmark ---------------------------------------------------------- */

/* Times the four sub-steps at 6, 4 and 2 neighbours; repetitions >= 100. */
DSBE_API dsbe_status dsbe_bench_create(int repetitions, uint64_t seed, dsbe_bench** out);
DSBE_API void dsbe_bench_destroy(dsbe_bench* bench);

/* row: 0 measurement, 1 diffusion, 2 time, 3 luenberger; col: 0..2 for k = 6, 4, 2. */
DSBE_API dsbe_status dsbe_bench_value(const dsbe_bench* bench, int row, int col, double* mean_us);
DSBE_API dsbe_status dsbe_bench_csv(const dsbe_bench* bench, char* buffer, size_t capacity, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
