/*
 * Copyright 2026 The poialias Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the poialias library. All functions report failures via a
 * pa_status code; the message of the most recent failure on the calling
 * thread is available from pa_last_error(). Strings are UTF-8. */
#ifndef POIALIAS_POIALIAS_H_
#define POIALIAS_POIALIAS_H_

#include <stddef.h>

#if defined(POIALIAS_BUILDING_LIBRARY)
#define POIALIAS_API __attribute__((visibility("default")))
#else
#define POIALIAS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pa_status {
  PA_OK = 0,
  PA_INVALID_ARGUMENT = 1,
  PA_NOT_FOUND = 2,
  PA_IO = 3,
  PA_PARSE = 4,
  PA_CONFLICT = 5,
  PA_INSUFFICIENT = 6,
  PA_OUT_OF_RANGE = 7,
  PA_INTERNAL = 8,
  /* Output buffer too small; *needed holds the required size. */
  PA_BUFFER_TOO_SMALL = 9
} pa_status;

typedef struct pa_config pa_config;

typedef struct pa_point {
  double x;
  double y;
} pa_point;

typedef struct pa_window {
  double x0;
  double y0;
  double side;
  size_t count;
} pa_window;

POIALIAS_API const char* pa_version(void);
POIALIAS_API const char* pa_status_name(pa_status status);
/* Message of the last failed call on this thread; "" if none. */
POIALIAS_API const char* pa_last_error(void);

/* Pipeline configuration. Keys and defaults are those of the CLI
 * (method, threshold, grid_n, synth.seed, ...). */
POIALIAS_API pa_status pa_config_create(pa_config** out);
POIALIAS_API void pa_config_destroy(pa_config* config);
POIALIAS_API pa_status pa_config_set(pa_config* config, const char* key,
                                     const char* value);
/* Copies the resolved value including the terminating NUL. */
POIALIAS_API pa_status pa_config_get(const pa_config* config, const char* key,
                                     char* buf, size_t cap, size_t* needed);
/* key=value lines, '#' comments. */
POIALIAS_API pa_status pa_config_load_file(pa_config* config,
                                           const char* path);

POIALIAS_API size_t pa_stage_count(void);
POIALIAS_API const char* pa_stage_name(size_t index);
/* Runs synth, ingest-check, preprocess, discover, evaluate, crossval,
 * transfer or sweep. */
POIALIAS_API pa_status pa_run_stage(const pa_config* config,
                                    const char* stage);

/* Primitives. */
POIALIAS_API pa_status pa_haversine(double lat1, double lon1, double lat2,
                                    double lon2, double* out_m);
POIALIAS_API pa_status pa_max_coverage_window(const pa_point* points, size_t n,
                                              double side, pa_window* out);
POIALIAS_API pa_status pa_local_region_centroid(const double* lat,
                                                const double* lon, size_t n,
                                                double side_m, double* out_lat,
                                                double* out_lon);
/* p and q are row-major n_grid x n_grid probability grids. */
POIALIAS_API pa_status pa_kl_divergence(const double* p, const double* q,
                                        size_t n_grid, double epsilon,
                                        double* out);
POIALIAS_API pa_status pa_jaccard_distance(const double* p, const double* q,
                                           size_t n_grid, double* out);
POIALIAS_API pa_status pa_normalized_edit_distance(const char* a,
                                                   const char* b, double* out);
POIALIAS_API pa_status pa_clean_text(const char* text, char* buf, size_t cap,
                                     size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* POIALIAS_POIALIAS_H_ */
