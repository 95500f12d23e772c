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

#ifndef POIALIAS_EVAL_H_
#define POIALIAS_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "poialias/discovery.h"
#include "poialias/ingestion.h"

namespace poialias {

// Confusion counts over labeled pairs only.
struct Counts {
  std::uint64_t true_positive = 0;
  std::uint64_t predicted_positive = 0;
  std::uint64_t actual_positive = 0;

  Counts& operator+=(const Counts& o) {
    true_positive += o.true_positive;
    predicted_positive += o.predicted_positive;
    actual_positive += o.actual_positive;
    return *this;
  }
};

// Precision, recall and F1 derived from counts, each as one division of
// integers: P = tp / pp, R = tp / ap, F1 = 2 tp / (pp + ap). A zero
// denominator yields 0 and sets the matching flag.
struct Metrics {
  Counts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
};

Metrics MetricsFromCounts(const Counts& counts);

struct EvalReport {
  std::string method;
  double threshold = 0.0;
  Metrics overall;  // counts pooled over districts
  std::vector<std::pair<std::string, Metrics>> per_district;
  std::size_t insufficient_pairs = 0;
  std::size_t labeled_pairs = 0;
  std::size_t orphan_labels = 0;
  std::map<std::string, std::string> config;  // resolved settings echo
};

// Compares one inferred matrix with labels of the same district. Only labels
// whose names both appear in the matrix are counted; predictions on
// unlabeled pairs are ignored.
EvalReport PrecisionRecallF1(const AliasMatrix& inferred,
                             const std::vector<GroundTruthLabel>& truth);

Counts CountLabeled(const DiscoveryResult& result, const PairLabels& labels);

// A scored district together with its canonical labels.
struct ScoredDistrict {
  std::string district;
  DiscoveryResult result;
  PairLabels labels;
  std::size_t orphan_labels = 0;
};

std::vector<ScoredDistrict> ScoreDistricts(
    const std::vector<DistrictData>& districts, const MetricConfig& config);

// Applies `threshold` to every district and pools the counts.
EvalReport EvaluateAt(std::vector<ScoredDistrict>& districts, double threshold,
                      const MetricConfig& config);

struct LabeledScore {
  double score = 0.0;
  bool positive = false;
};

struct Calibration {
  double threshold = 0.0;  // may be +/- infinity
  Metrics metrics;
};

// Picks the threshold maximizing F1 over +inf, the midpoints between
// consecutive distinct scores, and -inf. Ties go to the largest threshold.
// `unscored_positives` are labeled positives that can never be predicted
// (insufficient profiles); they only enter the recall denominator.
// Throws kInvalidArgument when there is no positive label at all.
Calibration CalibrateThreshold(std::vector<LabeledScore> scored,
                               std::size_t unscored_positives = 0);

Calibration CalibrateThreshold(const std::vector<ScoredDistrict>& districts);

struct FoldReport {
  std::size_t fold = 0;
  std::vector<std::string> train_districts;
  std::vector<std::string> test_districts;
  double threshold = 0.0;
  double train_f1 = 0.0;
  EvalReport test;
};

struct CrossValidationReport {
  std::vector<FoldReport> folds;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  Metrics pooled;  // counts summed over all test folds
};

// Fold layout for k labeled districts sorted by name: each fold tests
// max(1, k - ceil(train_frac * k)) districts, assigned round-robin.
// Returns fold index per district. Throws kInvalidArgument for k < 2.
std::vector<std::size_t> AssignFolds(std::size_t district_count,
                                     double train_frac, std::size_t& n_folds);

CrossValidationReport DistrictCrossValidation(
    const std::vector<DistrictData>& districts, const MetricConfig& config,
    double train_frac = 0.8);

struct TransferReport {
  double threshold = 0.0;
  double source_f1 = 0.0;  // source evaluated at its own calibrated threshold
  EvalReport target;
};

// Calibrates on every source label and evaluates the target unchanged.
TransferReport CrossCityTransfer(const std::vector<DistrictData>& source,
                                 const std::vector<DistrictData>& target,
                                 const MetricConfig& config);

// One calibrate-then-evaluate cycle per grid size.
std::vector<std::pair<std::size_t, EvalReport>> ResolutionSweep(
    const std::vector<DistrictData>& districts, const MetricConfig& config,
    const std::vector<std::size_t>& grid_values);

// Text-only baseline: link iff normalized edit distance < edit_threshold.
AliasMatrix EditDistanceBaseline(const std::string& district,
                                 const std::vector<std::string>& standards,
                                 const std::vector<std::string>& candidates,
                                 double edit_threshold);

}  // namespace poialias

#endif  // POIALIAS_EVAL_H_
