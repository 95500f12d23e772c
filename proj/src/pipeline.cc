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

#include "poialias/pipeline.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "poialias/artifacts.h"
#include "poialias/csv.h"
#include "poialias/error.h"
#include "poialias/eval.h"
#include "poialias/ingestion.h"
#include "poialias/log.h"
#include "poialias/parallel.h"

namespace poialias {

namespace {

using nlohmann::json;

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  throw Error(ErrorCode::kInvalidArgument,
              "config " + std::string(key) + ": expected " +
                  std::string(expected) + ", got '" + std::string(value) + "'");
}

double ParseDouble(std::string_view key, std::string_view value) {
  double out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() ||
      ptr != value.data() + value.size() || !std::isfinite(out)) {
    BadValue(key, value, "a finite number");
  }
  return out;
}

std::size_t ParseSize(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() ||
      ptr != value.data() + value.size()) {
    BadValue(key, value, "a non-negative integer");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "0" || value == "false" || value == "no" || value == "off") {
    return false;
  }
  BadValue(key, value, "a boolean");
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

LogLevel ParseLevel(std::string_view v) {
  if (v == "error") return LogLevel::kError;
  if (v == "warn") return LogLevel::kWarn;
  if (v == "info") return LogLevel::kInfo;
  if (v == "debug") return LogLevel::kDebug;
  BadValue("verbosity", v, "error, warn, info or debug");
}

json Number(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

json MetricsJson(const Metrics& m) {
  return {{"true_positive", m.counts.true_positive},
          {"predicted_positive", m.counts.predicted_positive},
          {"actual_positive", m.counts.actual_positive},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"precision_undefined", m.precision_undefined},
          {"recall_undefined", m.recall_undefined}};
}

json EvalReportJson(const EvalReport& r) {
  json per = json::array();
  for (const auto& [district, m] : r.per_district) {
    json d = MetricsJson(m);
    d["district"] = district;
    per.push_back(std::move(d));
  }
  return {{"method", r.method},
          {"threshold", Number(r.threshold)},
          {"overall", MetricsJson(r.overall)},
          {"per_district", std::move(per)},
          {"insufficient_pairs", r.insufficient_pairs},
          {"labeled_pairs", r.labeled_pairs},
          {"orphan_labels", r.orphan_labels},
          {"config", r.config}};
}

// Settings that determine numeric results; paths and scheduling are left
// out so reports from different directories compare equal.
std::map<std::string, std::string> ReportConfig(const PipelineConfig& config) {
  auto all = config.Resolved();
  for (const char* key : {"input_dir", "out_dir", "source_dir", "target_dir",
                          "threads", "verbosity", "dump_profiles",
                          "dump_density"}) {
    all.erase(key);
  }
  for (auto it = all.begin(); it != all.end();) {
    it = it->first.starts_with("synth.") ? all.erase(it) : std::next(it);
  }
  return all;
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

class Timer {
 public:
  double Lap() {
    const auto now = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
};

// Accumulates manifest details for one stage run.
struct StageRun {
  std::string stage;
  json timings = json::object();
  json counts = json::object();
  Timer timer;

  void Phase(const std::string& name) { timings[name + "_ms"] = timer.Lap(); }
};

void AddManifest(ArtifactSet& out, const PipelineConfig& config,
                 const StageRun& run) {
  const auto path = std::filesystem::path(config.out_dir) / "run_manifest.json";
  json manifest = json::object();
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      manifest = json::parse(ReadFile(path));
    } catch (const std::exception&) {
      Log(LogLevel::kWarn, "manifest_reset", {{"path", path.string()}});
      manifest = json::object();
    }
    if (!manifest.is_object()) manifest = json::object();
  }
  manifest["last_stage"] = run.stage;
  manifest["stages"][run.stage] = {{"timings", run.timings},
                                   {"counts", run.counts},
                                   {"config", config.Resolved()}};
  out.Add("run_manifest.json", Dump(manifest));
}

struct Threshold {
  bool calibrate = true;
  double value = 0.0;  // score threshold
};

Threshold ResolveThreshold(const PipelineConfig& config, Method method) {
  Threshold t;
  if (config.threshold == "calibrate") return t;
  t.calibrate = false;
  const double v = ParseDouble("threshold", config.threshold);
  t.value = method == Method::kEditDistance ? -v : v;
  return t;
}

std::vector<DistrictData> Prepare(const Corpus& corpus,
                                  const PipelineConfig& config) {
  return PrepareCity(corpus, config.cluster_threshold);
}

std::string ScoreText(const std::optional<double>& score) {
  return score ? FormatDouble(*score) : std::string();
}

void RunSynth(const PipelineConfig& config, StageRun& run) {
  const SynthCity city = GenerateCity(config.synth);
  run.Phase("generate");
  ArtifactSet out(config.out_dir);
  out.Add("addresses.csv", AddressRecordsToCsv(city.corpus.addresses));
  out.Add("locations.csv", LocationLogToCsv(city.corpus.locations));
  out.Add("labels.csv", LabelsToCsv(city.corpus.labels));
  out.Add("standards.csv", StandardsToCsv(city.corpus.standards));
  out.Add("truth_meta.json", TruthMetaJson(city));
  std::size_t positives = 0;
  for (const auto& l : city.corpus.labels) positives += l.is_alias;
  run.counts = {{"districts", city.corpus.districts.size()},
                {"addresses", city.corpus.addresses.size()},
                {"users_with_locations", city.corpus.locations.size()},
                {"labels", city.corpus.labels.size()},
                {"positive_labels", positives},
                {"planted_aliases", city.planted_aliases}};
  run.Phase("serialize");
  AddManifest(out, config, run);
  out.Commit();
}

void RunIngestCheck(const PipelineConfig& config, StageRun& run) {
  const Corpus corpus = LoadCorpus(config.InputDir());
  run.Phase("load");
  json files = json::array();
  std::size_t row_errors = 0;
  for (const auto& r : corpus.reports) {
    json errors = json::array();
    for (const auto& e : r.errors) {
      errors.push_back({{"row", e.row}, {"message", e.message}});
    }
    row_errors += r.errors.size();
    files.push_back({{"source", r.source},
                     {"rows_read", r.rows_read},
                     {"rows_accepted", r.rows_accepted},
                     {"errors", std::move(errors)},
                     {"warnings", r.warnings}});
  }
  json orphans = json::array();
  for (const auto& l : corpus.orphan_labels) {
    orphans.push_back({{"district", l.district},
                       {"standard_name", l.standard_name},
                       {"candidate_name", l.candidate_name}});
  }
  run.counts = {{"addresses", corpus.addresses.size()},
                {"users_with_locations", corpus.locations.size()},
                {"labels", corpus.labels.size()},
                {"districts", corpus.districts.size()},
                {"row_errors", row_errors},
                {"orphan_labels", corpus.orphan_labels.size()}};
  json report = {{"files", std::move(files)},
                 {"districts", corpus.districts},
                 {"counts", run.counts},
                 {"orphan_labels", std::move(orphans)}};
  ArtifactSet out(config.out_dir);
  out.Add("ingest_report.json", Dump(report));
  AddManifest(out, config, run);
  out.Commit();
}

void RunPreprocess(const PipelineConfig& config, StageRun& run) {
  const Corpus corpus = LoadCorpus(config.InputDir());
  run.Phase("load");
  const auto districts = Prepare(corpus, config);
  run.Phase("cluster");
  std::string csv = "district,raw_name,canonical_name\n";
  std::size_t raw = 0, canonical = 0;
  for (const auto& d : districts) {
    for (const auto& [from, to] : d.canonical.mapping) {
      csv += csv::JoinRow({d.district, from, to});
      csv += '\n';
    }
    raw += d.canonical.mapping.size();
    canonical += d.canonical.CanonicalCount();
  }
  run.counts = {{"districts", districts.size()},
                {"raw_names", raw},
                {"canonical_names", canonical}};
  ArtifactSet out(config.out_dir);
  out.Add("canonical_map.csv", std::move(csv));
  AddManifest(out, config, run);
  out.Commit();
}

void AddDensityDumps(ArtifactSet& out, const DistrictData& d,
                     const MetricConfig& metric) {
  std::vector<GeoPoint> all;
  for (const auto* group : {&d.standards, &d.candidates}) {
    for (const auto& p : *group) all.insert(all.end(), p.points.begin(), p.points.end());
  }
  if (all.empty()) return;
  const BoundingBox bbox = BoundingBoxOf(all, metric.bbox_padding);
  std::string index = "file,kind,name,points,dropped\n";
  auto dump = [&](const MobilityProfile& p, const char* kind, std::size_t i) {
    if (p.points.empty()) return;
    const Rasterization r = Rasterize(p, bbox, metric.grid_n);
    const std::string file =
        "density/" + d.district + "/" + kind + std::to_string(i) + ".csv";
    out.Add(file, r.matrix.ToCsv());
    index += csv::JoinRow({file, kind, p.name, std::to_string(p.points.size()),
                           std::to_string(r.dropped)});
    index += '\n';
  };
  for (std::size_t i = 0; i < d.standards.size(); ++i) {
    dump(d.standards[i], "standard", i);
  }
  for (std::size_t i = 0; i < d.candidates.size(); ++i) {
    dump(d.candidates[i], "candidate", i);
  }
  out.Add("density/" + d.district + "/index.csv", std::move(index));
}

void RunDiscover(const PipelineConfig& config, StageRun& run) {
  const MetricConfig base = config.Metric();
  const Corpus corpus = LoadCorpus(config.InputDir());
  run.Phase("load");
  const auto districts = Prepare(corpus, config);
  run.Phase("prepare");
  auto scored = ScoreDistricts(districts, base);
  run.Phase("score");

  const Threshold t = ResolveThreshold(config, base.method);
  json discovery = json::object();
  double threshold = t.value;
  if (t.calibrate) {
    const Calibration c = CalibrateThreshold(scored);
    threshold = c.threshold;
    discovery["calibration"] = MetricsJson(c.metrics);
  }
  for (auto& d : scored) ApplyThreshold(d.result, threshold);
  run.Phase("threshold");

  std::string csv = "district,standard_name,candidate_name,score,decision\n";
  json per = json::array();
  std::size_t links = 0, pairs = 0, insufficient = 0;
  for (const auto& d : scored) {
    for (const auto& p : d.result.pairs) {
      csv += csv::JoinRow({d.district, p.standard_name, p.candidate_name,
                           ScoreText(p.score), DecisionName(p.decision)});
      csv += '\n';
    }
    per.push_back({{"district", d.district},
                   {"standards", d.result.matrix.standard_names.size()},
                   {"candidates", d.result.matrix.candidate_names.size()},
                   {"links", d.result.matrix.links.size()},
                   {"insufficient_pairs", d.result.insufficient_pairs}});
    links += d.result.matrix.links.size();
    pairs += d.result.pairs.size();
    insufficient += d.result.insufficient_pairs;
  }
  discovery["method"] = MethodName(base.method);
  discovery["threshold"] = Number(threshold);
  discovery["threshold_source"] = t.calibrate ? "calibrated" : "fixed";
  discovery["districts"] = std::move(per);
  discovery["config"] = ReportConfig(config);
  run.counts = {{"districts", scored.size()},
                {"pairs", pairs},
                {"links", links},
                {"insufficient_pairs", insufficient}};

  ArtifactSet out(config.out_dir);
  out.Add("aliases.csv", std::move(csv));
  out.Add("discovery.json", Dump(discovery));
  if (config.dump_profiles) {
    std::string lines;
    for (const auto& d : districts) {
      for (const auto* group : {&d.standards, &d.candidates}) {
        for (const auto& p : *group) {
          lines += json{{"district", d.district},
                        {"name", p.name},
                        {"user_count", p.user_count},
                        {"point_count", p.point_count()}}
                       .dump();
          lines += '\n';
        }
      }
    }
    out.Add("profiles.jsonl", std::move(lines));
  }
  if (config.dump_density) {
    for (const auto& d : districts) AddDensityDumps(out, d, base);
  }
  run.Phase("serialize");
  AddManifest(out, config, run);
  out.Commit();
}

double ParseThresholdJson(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw Error(ErrorCode::kParse, "bad threshold value '" + s + "'");
}

void RunEvaluate(const PipelineConfig& config, StageRun& run) {
  const auto out_dir = std::filesystem::path(config.out_dir);
  const auto aliases_path = out_dir / "aliases.csv";
  const auto discovery_path = out_dir / "discovery.json";
  for (const auto& p : {aliases_path, discovery_path}) {
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorCode::kNotFound,
                  "file not found: " + p.string() + " (run discover first)");
    }
  }
  json discovery;
  try {
    discovery = json::parse(ReadFile(discovery_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse,
                discovery_path.string() + ": " + std::string(e.what()));
  }
  const Corpus corpus = LoadCorpus(config.InputDir());
  const auto districts = Prepare(corpus, config);
  run.Phase("load");

  // (district, standard, candidate) -> decision
  std::map<std::tuple<std::string, std::string, std::string>, std::string>
      decisions;
  const auto rows = csv::Parse(ReadFile(aliases_path));
  if (rows.empty() ||
      rows[0].fields != std::vector<std::string>{"district", "standard_name",
                                                 "candidate_name", "score",
                                                 "decision"}) {
    throw Error(ErrorCode::kParse,
                aliases_path.string() + ": unexpected header");
  }
  std::size_t insufficient = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (rows[r].malformed || f.size() != 5) {
      throw Error(ErrorCode::kParse, aliases_path.string() + ":" +
                                         std::to_string(rows[r].line) +
                                         ": malformed row");
    }
    insufficient += f[4] == "insufficient";
    decisions[{f[0], f[1], f[2]}] = f[4];
  }

  EvalReport report;
  report.method = discovery.value("method", std::string());
  report.threshold = ParseThresholdJson(discovery.at("threshold"));
  report.config = ReportConfig(config);
  report.config["method"] = report.method;
  report.insufficient_pairs = insufficient;
  Counts pooled;
  for (const auto& d : districts) {
    Counts c;
    for (const auto& [key, positive] : d.labels) {
      const auto it = decisions.find({d.district, key.first, key.second});
      if (it == decisions.end()) continue;
      const bool predicted = it->second == "alias";
      c.true_positive += predicted && positive;
      c.predicted_positive += predicted;
      c.actual_positive += positive;
    }
    pooled += c;
    report.per_district.emplace_back(d.district, MetricsFromCounts(c));
    report.labeled_pairs += d.labels.size();
    report.orphan_labels += d.orphan_labels;
  }
  report.overall = MetricsFromCounts(pooled);
  run.Phase("score");
  run.counts = {{"labeled_pairs", report.labeled_pairs},
                {"f1", report.overall.f1}};
  json j = EvalReportJson(report);
  j["stage"] = "evaluate";
  ArtifactSet out(config.out_dir);
  out.Add("report.json", Dump(j));
  AddManifest(out, config, run);
  out.Commit();
}

void RunCrossval(const PipelineConfig& config, StageRun& run) {
  MetricConfig metric = config.Metric();
  const Corpus corpus = LoadCorpus(config.InputDir());
  const auto districts = Prepare(corpus, config);
  run.Phase("load");
  const auto cv = DistrictCrossValidation(districts, metric, config.train_frac);
  run.Phase("crossval");
  json folds = json::array();
  for (const auto& f : cv.folds) {
    json test = EvalReportJson(f.test);
    test["config"] = ReportConfig(config);
    folds.push_back({{"fold", f.fold},
                     {"train_districts", f.train_districts},
                     {"test_districts", f.test_districts},
                     {"threshold", Number(f.threshold)},
                     {"train_f1", f.train_f1},
                     {"test", std::move(test)}});
  }
  json report = {{"stage", "crossval"},
                 {"method", MethodName(metric.method)},
                 {"train_frac", config.train_frac},
                 {"folds", std::move(folds)},
                 {"mean_precision", cv.mean_precision},
                 {"mean_recall", cv.mean_recall},
                 {"mean_f1", cv.mean_f1},
                 {"pooled", MetricsJson(cv.pooled)},
                 {"config", ReportConfig(config)}};
  run.counts = {{"folds", cv.folds.size()}, {"mean_f1", cv.mean_f1}};
  ArtifactSet out(config.out_dir);
  out.Add("report.json", Dump(report));
  AddManifest(out, config, run);
  out.Commit();
}

void RunTransfer(const PipelineConfig& config, StageRun& run) {
  if (config.source_dir.empty() || config.target_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "transfer needs both source_dir and target_dir");
  }
  const MetricConfig metric = config.Metric();
  const auto source = Prepare(LoadCorpus(config.source_dir), config);
  const auto target = Prepare(LoadCorpus(config.target_dir), config);
  run.Phase("load");
  const TransferReport t = CrossCityTransfer(source, target, metric);
  run.Phase("transfer");
  json target_json = EvalReportJson(t.target);
  target_json["config"] = ReportConfig(config);
  json report = {{"stage", "transfer"},
                 {"method", MethodName(metric.method)},
                 {"threshold", Number(t.threshold)},
                 {"source_f1", t.source_f1},
                 {"target", std::move(target_json)},
                 {"config", ReportConfig(config)}};
  run.counts = {{"source_f1", t.source_f1}, {"target_f1", t.target.overall.f1}};
  ArtifactSet out(config.out_dir);
  out.Add("report.json", Dump(report));
  AddManifest(out, config, run);
  out.Commit();
}

void RunSweep(const PipelineConfig& config, StageRun& run) {
  const MetricConfig metric = config.Metric();
  const Corpus corpus = LoadCorpus(config.InputDir());
  const auto districts = Prepare(corpus, config);
  run.Phase("load");
  const auto results = ResolutionSweep(districts, metric, config.grids);
  run.Phase("sweep");
  std::string csv = "grid_n,method,precision,recall,f1\n";
  json points = json::array();
  for (const auto& [n, r] : results) {
    csv += csv::JoinRow({std::to_string(n), r.method,
                         FormatDouble(r.overall.precision),
                         FormatDouble(r.overall.recall),
                         FormatDouble(r.overall.f1)});
    csv += '\n';
    json rj = EvalReportJson(r);
    rj["config"]["grid_n"] = std::to_string(n);
    points.push_back({{"grid_n", n}, {"report", std::move(rj)}});
  }
  json report = {{"stage", "sweep"},
                 {"method", MethodName(metric.method)},
                 {"sweep", std::move(points)},
                 {"config", ReportConfig(config)}};
  run.counts = {{"grid_values", results.size()}};
  ArtifactSet out(config.out_dir);
  out.Add("sweep.csv", std::move(csv));
  out.Add("report.json", Dump(report));
  AddManifest(out, config, run);
  out.Commit();
}

}  // namespace

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  const std::string v = Trim(value);
  if (key.starts_with("synth.")) {
    synth.Set(key.substr(6), v);
  } else if (key == "seed") {
    synth.Set("seed", v);
  } else if (key == "input_dir" || key == "input") {
    input_dir = v;
  } else if (key == "out_dir" || key == "out") {
    out_dir = v;
  } else if (key == "source_dir" || key == "source") {
    source_dir = v;
  } else if (key == "target_dir" || key == "target") {
    target_dir = v;
  } else if (key == "method") {
    ParseMethod(v);
    method = v;
  } else if (key == "threshold") {
    if (v != "calibrate") ParseDouble(key, v);
    threshold = v;
  } else if (key == "local_window_m") {
    local_window_m = ParseDouble(key, v);
  } else if (key == "grid_n") {
    grid_n = ParseSize(key, v);
  } else if (key == "kl_epsilon") {
    kl_epsilon = ParseDouble(key, v);
  } else if (key == "min_profile_points") {
    min_profile_points = ParseSize(key, v);
  } else if (key == "cluster_threshold") {
    cluster_threshold = ParseDouble(key, v);
  } else if (key == "bbox_padding") {
    bbox_padding = ParseDouble(key, v);
  } else if (key == "train_frac") {
    train_frac = ParseDouble(key, v);
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
      BadValue(key, v, "a fraction in (0, 1)");
    }
  } else if (key == "grids") {
    std::vector<std::size_t> parsed;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      parsed.push_back(ParseSize(key, Trim(item)));
    }
    if (parsed.empty()) BadValue(key, v, "a comma-separated list of sizes");
    grids = std::move(parsed);
  } else if (key == "threads") {
    threads = ParseSize(key, v);
  } else if (key == "verbosity") {
    ParseLevel(v);
    verbosity = v;
  } else if (key == "dump_profiles") {
    dump_profiles = ParseBool(key, v);
  } else if (key == "dump_density") {
    dump_density = ParseBool(key, v);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown config key '" + std::string(key) + "'");
  }
}

std::string PipelineConfig::Get(std::string_view key) const {
  const auto all = Resolved();
  const auto it = all.find(std::string(key));
  if (it == all.end()) {
    throw Error(ErrorCode::kNotFound,
                "unknown config key '" + std::string(key) + "'");
  }
  return it->second;
}

void PipelineConfig::LoadFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kNotFound, "file not found: " + path.string());
  }
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, path.string() + ":" +
                                         std::to_string(line_no) +
                                         ": expected key=value");
    }
    try {
      Set(Trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no) +
                                ": " + e.what());
    }
  }
}

std::map<std::string, std::string> PipelineConfig::Resolved() const {
  std::string grid_list;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (i) grid_list += ',';
    grid_list += std::to_string(grids[i]);
  }
  std::map<std::string, std::string> out = {
      {"input_dir", InputDir().string()},
      {"out_dir", out_dir},
      {"source_dir", source_dir},
      {"target_dir", target_dir},
      {"method", MethodName(ParseMethod(method))},
      {"threshold", threshold},
      {"local_window_m", FormatDouble(local_window_m)},
      {"grid_n", std::to_string(grid_n)},
      {"kl_epsilon", FormatDouble(kl_epsilon)},
      {"min_profile_points", std::to_string(min_profile_points)},
      {"cluster_threshold", FormatDouble(cluster_threshold)},
      {"bbox_padding", FormatDouble(bbox_padding)},
      {"train_frac", FormatDouble(train_frac)},
      {"grids", grid_list},
      {"threads", std::to_string(threads)},
      {"verbosity", verbosity},
      {"dump_profiles", dump_profiles ? "true" : "false"},
      {"dump_density", dump_density ? "true" : "false"},
  };
  for (const auto& [k, v] : synth.ToMap()) out["synth." + k] = v;
  return out;
}

std::filesystem::path PipelineConfig::InputDir() const {
  return input_dir.empty() ? std::filesystem::path(out_dir)
                           : std::filesystem::path(input_dir);
}

MetricConfig PipelineConfig::Metric() const {
  MetricConfig m;
  m.method = ParseMethod(method);
  m.local_window_m = local_window_m;
  m.grid_n = grid_n;
  m.kl_epsilon = kl_epsilon;
  m.min_profile_points = min_profile_points;
  m.bbox_padding = bbox_padding;
  const Threshold t = ResolveThreshold(*this, m.method);
  if (!t.calibrate) m.threshold = t.value;
  m.Validate();
  return m;
}

const std::vector<std::string>& StageNames() {
  static const std::vector<std::string> names = {
      "synth",    "ingest-check", "preprocess", "discover",
      "evaluate", "crossval",     "transfer",   "sweep"};
  return names;
}

void RunStage(std::string_view stage, const PipelineConfig& config) {
  SetLogLevel(ParseLevel(config.verbosity));
  SetWorkerThreads(config.threads);
  StageRun run;
  run.stage = std::string(stage);
  Log(LogLevel::kInfo, "stage_start", {{"stage", run.stage}});
  try {
    if (stage == "synth") {
      RunSynth(config, run);
    } else if (stage == "ingest-check") {
      RunIngestCheck(config, run);
    } else if (stage == "preprocess") {
      RunPreprocess(config, run);
    } else if (stage == "discover") {
      RunDiscover(config, run);
    } else if (stage == "evaluate") {
      RunEvaluate(config, run);
    } else if (stage == "crossval") {
      RunCrossval(config, run);
    } else if (stage == "transfer") {
      RunTransfer(config, run);
    } else if (stage == "sweep") {
      RunSweep(config, run);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown stage '" + run.stage + "'");
    }
  } catch (const Error& e) {
    Log(LogLevel::kError, "stage_failed",
        {{"stage", run.stage}, {"code", ErrorCodeName(e.code())},
         {"message", e.what()}});
    throw Error(e.code(), run.stage + ": " + e.what());
  } catch (const std::exception& e) {
    Log(LogLevel::kError, "stage_failed",
        {{"stage", run.stage}, {"message", e.what()}});
    throw Error(ErrorCode::kInternal, run.stage + ": " + e.what());
  }
  Log(LogLevel::kInfo, "stage_done", {{"stage", run.stage}});
}

}  // namespace poialias
