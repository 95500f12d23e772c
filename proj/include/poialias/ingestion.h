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

#ifndef POIALIAS_INGESTION_H_
#define POIALIAS_INGESTION_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "poialias/geo.h"

namespace poialias {

// One delivery address: administrative terms plus the free-text POI name.
struct AddressRecord {
  std::string user_id;
  std::string province;
  std::string city;
  std::string district;
  std::string poi_name;

  bool operator==(const AddressRecord&) const = default;
};

// user_id -> GPS points in file order.
using LocationLog = std::map<std::string, std::vector<GeoPoint>>;

struct GroundTruthLabel {
  std::string district;
  std::string standard_name;
  std::string candidate_name;
  bool is_alias = false;

  bool operator==(const GroundTruthLabel&) const = default;
};

struct RowError {
  std::size_t row = 0;  // 1-based line number in the source file
  std::string message;
};

// Per-file bookkeeping. Rows that fail validation are skipped and recorded
// here instead of aborting the load.
struct LoadReport {
  std::string source;
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::vector<RowError> errors;
  std::vector<std::string> warnings;
};

template <typename T>
struct Loaded {
  T value;
  LoadReport report;
};

enum class FileFormat { kCsv, kJsonl };

// Picks the format from the file extension (".jsonl" or ".csv").
FileFormat FormatFromPath(const std::filesystem::path& path);

Loaded<std::vector<AddressRecord>> ParseAddressRecords(
    const std::filesystem::path& path, FileFormat format);
Loaded<std::vector<AddressRecord>> ParseAddressRecordsText(
    std::string_view text, FileFormat format, std::string_view source = "");

Loaded<LocationLog> ParseLocationLog(const std::filesystem::path& path,
                                     FileFormat format);
Loaded<LocationLog> ParseLocationLogText(std::string_view text,
                                         FileFormat format,
                                         std::string_view source = "");

// Duplicate (district, standard, candidate) triples are collapsed with a
// warning. The same triple with different is_alias values throws a
// kConflict error naming the triple.
Loaded<std::vector<GroundTruthLabel>> ParseLabels(
    const std::filesystem::path& path, FileFormat format);
Loaded<std::vector<GroundTruthLabel>> ParseLabelsText(
    std::string_view text, FileFormat format, std::string_view source = "");

// Registry of standard names: district -> names, from `district,standard_name`.
Loaded<std::map<std::string, std::vector<std::string>>> ParseStandardsText(
    std::string_view text, std::string_view source = "");

// Canonical CSV serializations (header included).
std::string AddressRecordsToCsv(const std::vector<AddressRecord>& records);
std::string LocationLogToCsv(const LocationLog& log);
std::string LabelsToCsv(const std::vector<GroundTruthLabel>& labels);
std::string StandardsToCsv(
    const std::map<std::string, std::vector<std::string>>& standards);

std::map<std::string, std::vector<AddressRecord>> PartitionByDistrict(
    const std::vector<AddressRecord>& records);

// Everything needed to run discovery on one city.
struct Corpus {
  std::vector<AddressRecord> addresses;
  LocationLog locations;
  std::vector<GroundTruthLabel> labels;
  std::vector<std::string> districts;  // sorted, unique
  // district -> registered standard names. When no registry file is present
  // this is derived from the standard_name column of the labels.
  std::map<std::string, std::vector<std::string>> standards;
  std::vector<LoadReport> reports;
  // Labels naming a POI that no address in the same district mentions.
  std::vector<GroundTruthLabel> orphan_labels;
};

// Loads addresses, locations and labels (CSV or JSONL) plus an optional
// standards.csv from `dir`. Throws kNotFound naming the missing path.
Corpus LoadCorpus(const std::filesystem::path& dir);

// Finalizes districts, the derived registry and orphan detection for a corpus
// assembled in memory.
void FinalizeCorpus(Corpus& corpus);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace poialias

#endif  // POIALIAS_INGESTION_H_
