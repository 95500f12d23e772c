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

#include "poialias/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "poialias/error.h"
#include "poialias/log.h"
#include "poialias/preprocess.h"

namespace poialias {

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::map<std::string, std::string> EchoConfig(const MetricConfig& config) {
  return {
      {"method", MethodName(config.method)},
      {"local_window_m", FormatDouble(config.local_window_m)},
      {"grid_n", std::to_string(config.grid_n)},
      {"kl_epsilon", FormatDouble(config.kl_epsilon)},
      {"min_profile_points", std::to_string(config.min_profile_points)},
      {"bbox_padding", FormatDouble(config.bbox_padding)},
  };
}

// True when 2a.tp / (a.pp + ap) > 2b.tp / (b.pp + ap), compared exactly.
bool BetterF1(const Counts& a, const Counts& b) {
  const unsigned __int128 lhs =
      static_cast<unsigned __int128>(a.true_positive) *
      (b.predicted_positive + b.actual_positive);
  const unsigned __int128 rhs =
      static_cast<unsigned __int128>(b.true_positive) *
      (a.predicted_positive + a.actual_positive);
  return lhs > rhs;
}

// A threshold strictly between lo and hi when one is representable;
// otherwise lo, which still separates the two scores under "score > t".
double Between(double lo, double hi) {
  const double mid = std::midpoint(lo, hi);
  return (mid > lo && mid < hi) ? mid : lo;
}

struct PairLookup {
  std::map<std::string, std::size_t> standard;
  std::map<std::string, std::size_t> candidate;

  PairLookup(const std::vector<std::string>& standards,
             const std::vector<std::string>& candidates) {
    for (std::size_t i = 0; i < standards.size(); ++i) standard[standards[i]] = i;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      candidate[candidates[j]] = j;
    }
  }

  bool Find(const std::string& s, const std::string& c, std::size_t& i,
            std::size_t& j) const {
    const auto si = standard.find(s);
    const auto cj = candidate.find(c);
    if (si == standard.end() || cj == candidate.end()) return false;
    i = si->second;
    j = cj->second;
    return true;
  }
};

std::vector<ScoredDistrict> Subset(const std::vector<ScoredDistrict>& all,
                                   const std::vector<std::size_t>& fold_of,
                                   std::size_t fold, bool in_fold) {
  std::vector<ScoredDistrict> out;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if ((fold_of[k] == fold) == in_fold) out.push_back(all[k]);
  }
  return out;
}

}  // namespace

Metrics MetricsFromCounts(const Counts& counts) {
  Metrics m;
  m.counts = counts;
  const auto tp = static_cast<double>(counts.true_positive);
  if (counts.predicted_positive > 0) {
    m.precision = tp / static_cast<double>(counts.predicted_positive);
  } else {
    m.precision_undefined = true;
  }
  if (counts.actual_positive > 0) {
    m.recall = tp / static_cast<double>(counts.actual_positive);
  } else {
    m.recall_undefined = true;
  }
  const std::uint64_t denom = counts.predicted_positive + counts.actual_positive;
  if (denom > 0) m.f1 = 2.0 * tp / static_cast<double>(denom);
  return m;
}

EvalReport PrecisionRecallF1(const AliasMatrix& inferred,
                             const std::vector<GroundTruthLabel>& truth) {
  const PairLookup lookup(inferred.standard_names, inferred.candidate_names);
  Counts counts;
  EvalReport report;
  for (const auto& label : truth) {
    if (!inferred.district.empty() && label.district != inferred.district) {
      continue;
    }
    std::size_t i, j;
    if (!lookup.Find(label.standard_name, label.candidate_name, i, j)) {
      ++report.orphan_labels;
      continue;
    }
    ++report.labeled_pairs;
    const bool predicted = inferred.Has(i, j);
    counts.true_positive += predicted && label.is_alias;
    counts.predicted_positive += predicted;
    counts.actual_positive += label.is_alias;
  }
  report.overall = MetricsFromCounts(counts);
  report.per_district.emplace_back(inferred.district, report.overall);
  return report;
}

Counts CountLabeled(const DiscoveryResult& result, const PairLabels& labels) {
  const PairLookup lookup(result.matrix.standard_names,
                          result.matrix.candidate_names);
  const std::size_t m = result.matrix.candidate_names.size();
  Counts counts;
  for (const auto& [key, positive] : labels) {
    std::size_t i, j;
    if (!lookup.Find(key.first, key.second, i, j)) continue;
    const bool predicted = result.pairs[i * m + j].decision == Decision::kAlias;
    counts.true_positive += predicted && positive;
    counts.predicted_positive += predicted;
    counts.actual_positive += positive;
  }
  return counts;
}

std::vector<ScoredDistrict> ScoreDistricts(
    const std::vector<DistrictData>& districts, const MetricConfig& config) {
  std::vector<ScoredDistrict> out;
  out.reserve(districts.size());
  for (const auto& d : districts) {
    ScoredDistrict sd;
    sd.district = d.district;
    sd.result = InferAliasMatrix(d.district, d.standards, d.candidates, config);
    sd.labels = d.labels;
    sd.orphan_labels = d.orphan_labels;
    out.push_back(std::move(sd));
  }
  return out;
}

EvalReport EvaluateAt(std::vector<ScoredDistrict>& districts, double threshold,
                      const MetricConfig& config) {
  EvalReport report;
  report.method = MethodName(config.method);
  report.threshold = threshold;
  report.config = EchoConfig(config);
  Counts pooled;
  for (auto& d : districts) {
    ApplyThreshold(d.result, threshold);
    const Counts c = CountLabeled(d.result, d.labels);
    pooled += c;
    report.per_district.emplace_back(d.district, MetricsFromCounts(c));
    report.insufficient_pairs += d.result.insufficient_pairs;
    report.labeled_pairs += d.labels.size();
    report.orphan_labels += d.orphan_labels;
  }
  report.overall = MetricsFromCounts(pooled);
  return report;
}

Calibration CalibrateThreshold(std::vector<LabeledScore> scored,
                               std::size_t unscored_positives) {
  std::uint64_t positives = unscored_positives;
  for (const auto& s : scored) positives += s.positive;
  if (positives == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold calibration needs at least one positive label");
  }
  std::sort(scored.begin(), scored.end(),
            [](const LabeledScore& a, const LabeledScore& b) {
              return a.score > b.score;
            });

  Counts running;
  running.actual_positive = positives;
  Calibration best;
  best.threshold = std::numeric_limits<double>::infinity();
  Counts best_counts = running;

  std::size_t k = 0;
  while (k < scored.size()) {
    const double score = scored[k].score;
    while (k < scored.size() && scored[k].score == score) {
      running.true_positive += scored[k].positive;
      ++running.predicted_positive;
      ++k;
    }
    if (BetterF1(running, best_counts)) {
      best_counts = running;
      best.threshold = k < scored.size()
                           ? Between(scored[k].score, score)
                           : -std::numeric_limits<double>::infinity();
    }
  }
  best.metrics = MetricsFromCounts(best_counts);
  return best;
}

Calibration CalibrateThreshold(const std::vector<ScoredDistrict>& districts) {
  std::vector<LabeledScore> scored;
  std::size_t unscored_positives = 0;
  for (const auto& d : districts) {
    const PairLookup lookup(d.result.matrix.standard_names,
                            d.result.matrix.candidate_names);
    const std::size_t m = d.result.matrix.candidate_names.size();
    for (const auto& [key, positive] : d.labels) {
      std::size_t i, j;
      if (!lookup.Find(key.first, key.second, i, j)) continue;
      const auto& score = d.result.pairs[i * m + j].score;
      if (score) {
        scored.push_back({*score, positive});
      } else if (positive) {
        ++unscored_positives;
      }
    }
  }
  return CalibrateThreshold(std::move(scored), unscored_positives);
}

std::vector<std::size_t> AssignFolds(std::size_t district_count,
                                     double train_frac, std::size_t& n_folds) {
  if (district_count < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "cross-validation needs at least 2 labeled districts, got " +
                    std::to_string(district_count));
  }
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train_frac must lie in (0, 1)");
  }
  const auto k = static_cast<double>(district_count);
  const auto train =
      static_cast<std::size_t>(std::ceil(train_frac * k - 1e-9));
  const std::size_t test =
      std::max<std::size_t>(1, district_count - std::min(train, district_count));
  n_folds = (district_count + test - 1) / test;
  std::vector<std::size_t> fold_of(district_count);
  for (std::size_t i = 0; i < district_count; ++i) fold_of[i] = i % n_folds;
  return fold_of;
}

CrossValidationReport DistrictCrossValidation(
    const std::vector<DistrictData>& districts, const MetricConfig& config,
    double train_frac) {
  std::vector<DistrictData> labeled;
  for (const auto& d : districts) {
    if (!d.labels.empty()) labeled.push_back(d);
  }
  std::sort(labeled.begin(), labeled.end(),
            [](const DistrictData& a, const DistrictData& b) {
              return a.district < b.district;
            });
  std::size_t n_folds = 0;
  const std::vector<std::size_t> fold_of =
      AssignFolds(labeled.size(), train_frac, n_folds);
  const std::vector<ScoredDistrict> scored = ScoreDistricts(labeled, config);

  CrossValidationReport report;
  Counts pooled;
  for (std::size_t f = 0; f < n_folds; ++f) {
    FoldReport fold;
    fold.fold = f;
    std::vector<ScoredDistrict> train = Subset(scored, fold_of, f, false);
    std::vector<ScoredDistrict> test = Subset(scored, fold_of, f, true);
    for (const auto& d : train) fold.train_districts.push_back(d.district);
    for (const auto& d : test) fold.test_districts.push_back(d.district);
    Calibration calib;
    try {
      calib = CalibrateThreshold(train);
    } catch (const Error& e) {
      throw Error(e.code(), "fold " + std::to_string(f) + ": " + e.what());
    }
    fold.threshold = calib.threshold;
    fold.train_f1 = calib.metrics.f1;
    fold.test = EvaluateAt(test, calib.threshold, config);
    pooled += fold.test.overall.counts;
    report.mean_precision += fold.test.overall.precision;
    report.mean_recall += fold.test.overall.recall;
    report.mean_f1 += fold.test.overall.f1;
    Log(LogLevel::kInfo, "fold",
        {{"fold", std::to_string(f)},
         {"threshold", FormatDouble(calib.threshold)},
         {"train_f1", FormatDouble(calib.metrics.f1)},
         {"test_f1", FormatDouble(fold.test.overall.f1)}});
    report.folds.push_back(std::move(fold));
  }
  const auto folds = static_cast<double>(n_folds);
  report.mean_precision /= folds;
  report.mean_recall /= folds;
  report.mean_f1 /= folds;
  report.pooled = MetricsFromCounts(pooled);
  return report;
}

TransferReport CrossCityTransfer(const std::vector<DistrictData>& source,
                                 const std::vector<DistrictData>& target,
                                 const MetricConfig& config) {
  const std::vector<ScoredDistrict> source_scored =
      ScoreDistricts(source, config);
  const Calibration calib = CalibrateThreshold(source_scored);
  std::vector<ScoredDistrict> target_scored = ScoreDistricts(target, config);
  TransferReport report;
  report.threshold = calib.threshold;
  report.source_f1 = calib.metrics.f1;
  report.target = EvaluateAt(target_scored, calib.threshold, config);
  return report;
}

std::vector<std::pair<std::size_t, EvalReport>> ResolutionSweep(
    const std::vector<DistrictData>& districts, const MetricConfig& config,
    const std::vector<std::size_t>& grid_values) {
  if (config.method != Method::kKl && config.method != Method::kJaccard) {
    throw Error(ErrorCode::kInvalidArgument,
                "resolution sweep applies to kl or jaccard only");
  }
  if (grid_values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty grid list");
  }
  std::vector<std::pair<std::size_t, EvalReport>> out;
  for (std::size_t n : grid_values) {
    MetricConfig c = config;
    c.grid_n = n;
    std::vector<ScoredDistrict> scored = ScoreDistricts(districts, c);
    const Calibration calib = CalibrateThreshold(scored);
    out.emplace_back(n, EvaluateAt(scored, calib.threshold, c));
    Log(LogLevel::kInfo, "sweep_point",
        {{"grid_n", std::to_string(n)},
         {"f1", FormatDouble(out.back().second.overall.f1)}});
  }
  return out;
}

AliasMatrix EditDistanceBaseline(const std::string& district,
                                 const std::vector<std::string>& standards,
                                 const std::vector<std::string>& candidates,
                                 double edit_threshold) {
  AliasMatrix matrix;
  matrix.district = district;
  matrix.standard_names = standards;
  matrix.candidate_names = candidates;
  for (std::size_t i = 0; i < standards.size(); ++i) {
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (NormalizedEditDistance(standards[i], candidates[j]) < edit_threshold) {
        matrix.links.emplace(i, j);
      }
    }
  }
  return matrix;
}

}  // namespace poialias
