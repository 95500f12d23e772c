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

#include "poialias/poialias.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "poialias/distribution.h"
#include "poialias/error.h"
#include "poialias/geo.h"
#include "poialias/pipeline.h"
#include "poialias/preprocess.h"

struct pa_config {
  poialias::PipelineConfig config;
};

namespace {

thread_local std::string g_last_error;

pa_status Fail(pa_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
pa_status Guard(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return PA_OK;
  } catch (const poialias::Error& e) {
    return Fail(static_cast<pa_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PA_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PA_INTERNAL, e.what());
  }
}

pa_status CopyOut(const std::string& value, char* buf, size_t cap,
                  size_t* needed) {
  if (needed) *needed = value.size() + 1;
  if (!buf || cap < value.size() + 1) {
    return Fail(PA_BUFFER_TOO_SMALL, "output buffer too small");
  }
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return PA_OK;
}

bool GridSize(size_t n_grid, size_t& cells) {
  if (n_grid == 0 || n_grid > 65535) return false;
  cells = n_grid * n_grid;
  return true;
}

}  // namespace

extern "C" {

const char* pa_version(void) { return "0.1.0"; }

const char* pa_status_name(pa_status status) {
  if (status == PA_BUFFER_TOO_SMALL) return "buffer_too_small";
  return poialias::ErrorCodeName(static_cast<poialias::ErrorCode>(status));
}

const char* pa_last_error(void) { return g_last_error.c_str(); }

pa_status pa_config_create(pa_config** out) {
  if (!out) return Fail(PA_INVALID_ARGUMENT, "out is null");
  return Guard([&] { *out = new pa_config(); });
}

void pa_config_destroy(pa_config* config) { delete config; }

pa_status pa_config_set(pa_config* config, const char* key,
                        const char* value) {
  if (!config || !key || !value) {
    return Fail(PA_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { config->config.Set(key, value); });
}

pa_status pa_config_get(const pa_config* config, const char* key, char* buf,
                        size_t cap, size_t* needed) {
  if (!config || !key) return Fail(PA_INVALID_ARGUMENT, "null argument");
  std::string value;
  const pa_status s = Guard([&] { value = config->config.Get(key); });
  if (s != PA_OK) return s;
  return CopyOut(value, buf, cap, needed);
}

pa_status pa_config_load_file(pa_config* config, const char* path) {
  if (!config || !path) return Fail(PA_INVALID_ARGUMENT, "null argument");
  return Guard([&] { config->config.LoadFile(path); });
}

size_t pa_stage_count(void) { return poialias::StageNames().size(); }

const char* pa_stage_name(size_t index) {
  const auto& names = poialias::StageNames();
  return index < names.size() ? names[index].c_str() : nullptr;
}

pa_status pa_run_stage(const pa_config* config, const char* stage) {
  if (!config || !stage) return Fail(PA_INVALID_ARGUMENT, "null argument");
  return Guard([&] { poialias::RunStage(stage, config->config); });
}

pa_status pa_haversine(double lat1, double lon1, double lat2, double lon2,
                       double* out_m) {
  if (!out_m) return Fail(PA_INVALID_ARGUMENT, "out is null");
  if (!poialias::IsValidGeoPoint({lat1, lon1}) ||
      !poialias::IsValidGeoPoint({lat2, lon2})) {
    return Fail(PA_INVALID_ARGUMENT, "coordinate out of range");
  }
  return Guard([&] { *out_m = poialias::Haversine({lat1, lon1}, {lat2, lon2}); });
}

pa_status pa_max_coverage_window(const pa_point* points, size_t n, double side,
                                 pa_window* out) {
  if (!out || (!points && n > 0)) {
    return Fail(PA_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    std::vector<poialias::PlanarPoint> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {points[i].x, points[i].y};
    const poialias::Window w = poialias::MaxCoverageWindow(pts, side);
    *out = {w.x0, w.y0, w.side, w.count};
  });
}

pa_status pa_local_region_centroid(const double* lat, const double* lon,
                                   size_t n, double side_m, double* out_lat,
                                   double* out_lon) {
  if (!out_lat || !out_lon || ((!lat || !lon) && n > 0)) {
    return Fail(PA_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    std::vector<poialias::GeoPoint> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {lat[i], lon[i]};
    const poialias::GeoPoint c = poialias::LocalRegionCentroid(pts, side_m);
    *out_lat = c.lat;
    *out_lon = c.lon;
  });
}

pa_status pa_kl_divergence(const double* p, const double* q, size_t n_grid,
                           double epsilon, double* out) {
  size_t cells = 0;
  if (!p || !q || !out) return Fail(PA_INVALID_ARGUMENT, "null argument");
  if (!GridSize(n_grid, cells)) {
    return Fail(PA_INVALID_ARGUMENT, "n_grid must lie in [1, 65535]");
  }
  return Guard([&] {
    const auto dp = poialias::Distribution::FromDense({p, cells}, n_grid);
    const auto dq = poialias::Distribution::FromDense({q, cells}, n_grid);
    *out = poialias::KlDivergence(dp, dq, epsilon);
  });
}

pa_status pa_jaccard_distance(const double* p, const double* q, size_t n_grid,
                              double* out) {
  size_t cells = 0;
  if (!p || !q || !out) return Fail(PA_INVALID_ARGUMENT, "null argument");
  if (!GridSize(n_grid, cells)) {
    return Fail(PA_INVALID_ARGUMENT, "n_grid must lie in [1, 65535]");
  }
  return Guard([&] {
    const auto dp = poialias::Distribution::FromDense({p, cells}, n_grid);
    const auto dq = poialias::Distribution::FromDense({q, cells}, n_grid);
    *out = poialias::JaccardDistance(dp, dq);
  });
}

pa_status pa_normalized_edit_distance(const char* a, const char* b,
                                      double* out) {
  if (!a || !b || !out) return Fail(PA_INVALID_ARGUMENT, "null argument");
  return Guard([&] { *out = poialias::NormalizedEditDistance(a, b); });
}

pa_status pa_clean_text(const char* text, char* buf, size_t cap,
                        size_t* needed) {
  if (!text) return Fail(PA_INVALID_ARGUMENT, "null argument");
  std::string cleaned;
  const pa_status s = Guard([&] { cleaned = poialias::CleanText(text); });
  if (s != PA_OK) return s;
  return CopyOut(cleaned, buf, cap, needed);
}

}  // extern "C"
