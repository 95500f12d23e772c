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

#ifndef POIALIAS_PREPROCESS_H_
#define POIALIAS_PREPROCESS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace poialias {

inline constexpr double kDefaultClusterThreshold = 0.2;

// Normalizes a raw POI name:
//   * all whitespace removed (ASCII and U+3000),
//   * full-width forms U+FF01..U+FF5E folded to ASCII,
//   * ASCII letters lower-cased,
//   * ASCII punctuation and 。、【】 stripped (，！？（） fold to ASCII first),
//   * digits and CJK characters kept verbatim.
// Invalid UTF-8 bytes are dropped. An empty result marks the record unusable.
std::string CleanText(std::string_view raw);

// Decodes UTF-8 into code points, dropping invalid sequences.
std::u32string DecodeUtf8(std::string_view text);

// Levenshtein distance over code points (unit-cost insert/delete/substitute).
std::size_t Levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t Levenshtein(std::string_view a, std::string_view b);

// Levenshtein distance divided by the longer length, in [0, 1]. Two empty
// strings have distance 0.
double NormalizedEditDistance(std::string_view a, std::string_view b);

struct CanonicalMap {
  std::map<std::string, std::string> mapping;     // raw -> canonical
  std::map<std::string, std::size_t> cluster_sizes;  // canonical -> members

  // Falls back to the identity for names never seen.
  const std::string& Resolve(const std::string& raw) const;
  std::size_t CanonicalCount() const { return cluster_sizes.size(); }
};

// Single-linkage clustering of names under normalized edit distance: two
// names share a cluster iff a chain of pairs with distance <= threshold joins
// them. Each cluster's canonical name is its most frequent member, ties
// broken lexicographically. Duplicate input names have their frequencies
// summed. The result does not depend on input order.
//
// Candidate pairs come from a bigram count filter followed by a banded edit
// distance check, so large name sets avoid the all-pairs quadratic DP.
CanonicalMap ClusterNearDuplicates(
    const std::vector<std::pair<std::string, std::size_t>>& names,
    double threshold = kDefaultClusterThreshold);

}  // namespace poialias

#endif  // POIALIAS_PREPROCESS_H_
