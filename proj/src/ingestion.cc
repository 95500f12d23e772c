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

#include "poialias/ingestion.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "poialias/csv.h"
#include "poialias/error.h"
#include "poialias/log.h"
#include "poialias/preprocess.h"

namespace poialias {

namespace {

using nlohmann::json;

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool ParseDouble(std::string_view text, double& out) {
  const std::string t = Trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

// Generic row source: yields (line, field map) for either format, or a row
// error when the line itself cannot be decoded.
struct RawRow {
  std::size_t line = 0;
  std::map<std::string, std::string> fields;
  std::string error;
};

std::string JsonFieldToString(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

std::vector<RawRow> ReadRows(std::string_view text, FileFormat format,
                             const std::vector<std::string>& columns,
                             LoadReport& report) {
  std::vector<RawRow> rows;
  if (format == FileFormat::kCsv) {
    std::vector<csv::Row> parsed = csv::Parse(text);
    if (parsed.empty()) return rows;
    std::vector<std::string> header;
    for (const auto& f : parsed.front().fields) header.push_back(Trim(f));
    std::vector<std::size_t> index;
    for (const auto& col : columns) {
      const auto it = std::find(header.begin(), header.end(), col);
      if (it == header.end()) {
        throw Error(ErrorCode::kParse, report.source +
                                           ": header is missing column '" +
                                           col + "'");
      }
      index.push_back(static_cast<std::size_t>(it - header.begin()));
    }
    for (std::size_t r = 1; r < parsed.size(); ++r) {
      RawRow row;
      row.line = parsed[r].line;
      if (parsed[r].malformed) {
        row.error = "malformed quoting";
      } else if (parsed[r].fields.size() != header.size()) {
        row.error = "expected " + std::to_string(header.size()) +
                    " fields, found " +
                    std::to_string(parsed[r].fields.size());
      } else {
        for (std::size_t c = 0; c < columns.size(); ++c) {
          row.fields[columns[c]] = Trim(parsed[r].fields[index[c]]);
        }
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (Trim(line).empty()) continue;
    RawRow row;
    row.line = line_no;
    const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      row.error = "not a JSON object";
    } else {
      for (const auto& col : columns) {
        const auto it = obj.find(col);
        if (it == obj.end()) {
          row.error = "missing key '" + col + "'";
          break;
        }
        row.fields[col] = Trim(JsonFieldToString(*it));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void RecordError(LoadReport& report, std::size_t line, std::string message) {
  report.errors.push_back({line, std::move(message)});
}

}  // namespace

std::string ReadFile(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kNotFound, "file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FileFormat FormatFromPath(const std::filesystem::path& path) {
  return path.extension() == ".jsonl" ? FileFormat::kJsonl : FileFormat::kCsv;
}

Loaded<std::vector<AddressRecord>> ParseAddressRecordsText(
    std::string_view text, FileFormat format, std::string_view source) {
  Loaded<std::vector<AddressRecord>> out;
  out.report.source = std::string(source);
  const auto rows =
      ReadRows(text, format,
               {"user_id", "province", "city", "district", "poi_name"},
               out.report);
  for (const auto& row : rows) {
    ++out.report.rows_read;
    if (!row.error.empty()) {
      RecordError(out.report, row.line, row.error);
      continue;
    }
    AddressRecord rec{row.fields.at("user_id"), row.fields.at("province"),
                      row.fields.at("city"), row.fields.at("district"),
                      row.fields.at("poi_name")};
    if (rec.user_id.empty()) {
      RecordError(out.report, row.line, "empty user_id");
    } else if (rec.district.empty()) {
      RecordError(out.report, row.line, "empty district");
    } else if (rec.poi_name.empty()) {
      RecordError(out.report, row.line, "empty poi_name");
    } else {
      out.value.push_back(std::move(rec));
      ++out.report.rows_accepted;
    }
  }
  return out;
}

Loaded<std::vector<AddressRecord>> ParseAddressRecords(
    const std::filesystem::path& path, FileFormat format) {
  return ParseAddressRecordsText(ReadFile(path), format, path.string());
}

Loaded<LocationLog> ParseLocationLogText(std::string_view text,
                                         FileFormat format,
                                         std::string_view source) {
  Loaded<LocationLog> out;
  out.report.source = std::string(source);
  const auto rows = ReadRows(text, format, {"user_id", "lat", "lon"},
                             out.report);
  for (const auto& row : rows) {
    ++out.report.rows_read;
    if (!row.error.empty()) {
      RecordError(out.report, row.line, row.error);
      continue;
    }
    const std::string& user = row.fields.at("user_id");
    GeoPoint p;
    if (user.empty()) {
      RecordError(out.report, row.line, "empty user_id");
    } else if (!ParseDouble(row.fields.at("lat"), p.lat) ||
               !ParseDouble(row.fields.at("lon"), p.lon)) {
      RecordError(out.report, row.line, "unparseable coordinate");
    } else if (!IsValidGeoPoint(p)) {
      RecordError(out.report, row.line, "coordinate out of range");
    } else {
      out.value[user].push_back(p);
      ++out.report.rows_accepted;
    }
  }
  return out;
}

Loaded<LocationLog> ParseLocationLog(const std::filesystem::path& path,
                                     FileFormat format) {
  return ParseLocationLogText(ReadFile(path), format, path.string());
}

Loaded<std::vector<GroundTruthLabel>> ParseLabelsText(std::string_view text,
                                                      FileFormat format,
                                                      std::string_view source) {
  Loaded<std::vector<GroundTruthLabel>> out;
  out.report.source = std::string(source);
  const auto rows = ReadRows(
      text, format, {"district", "standard_name", "candidate_name", "is_alias"},
      out.report);
  std::map<std::tuple<std::string, std::string, std::string>, bool> seen;
  for (const auto& row : rows) {
    ++out.report.rows_read;
    if (!row.error.empty()) {
      RecordError(out.report, row.line, row.error);
      continue;
    }
    GroundTruthLabel label{row.fields.at("district"),
                           row.fields.at("standard_name"),
                           row.fields.at("candidate_name"), false};
    const std::string& flag = row.fields.at("is_alias");
    if (flag == "1" || flag == "true") {
      label.is_alias = true;
    } else if (flag != "0" && flag != "false") {
      RecordError(out.report, row.line, "is_alias must be 0 or 1");
      continue;
    }
    if (label.district.empty() || label.standard_name.empty() ||
        label.candidate_name.empty()) {
      RecordError(out.report, row.line, "empty label field");
      continue;
    }
    if (CleanText(label.standard_name) == CleanText(label.candidate_name)) {
      RecordError(out.report, row.line,
                  "standard_name equals candidate_name after normalization");
      continue;
    }
    auto key = std::make_tuple(label.district, label.standard_name,
                               label.candidate_name);
    const auto it = seen.find(key);
    if (it != seen.end()) {
      if (it->second != label.is_alias) {
        throw Error(ErrorCode::kConflict,
                    "conflicting labels for (" + label.district + ", " +
                        label.standard_name + ", " + label.candidate_name +
                        ")");
      }
      out.report.warnings.push_back(
          "line " + std::to_string(row.line) + ": duplicate label (" +
          label.district + ", " + label.standard_name + ", " +
          label.candidate_name + ") dropped");
      continue;
    }
    seen.emplace(std::move(key), label.is_alias);
    out.value.push_back(std::move(label));
    ++out.report.rows_accepted;
  }
  return out;
}

Loaded<std::vector<GroundTruthLabel>> ParseLabels(
    const std::filesystem::path& path, FileFormat format) {
  return ParseLabelsText(ReadFile(path), format, path.string());
}

Loaded<std::map<std::string, std::vector<std::string>>> ParseStandardsText(
    std::string_view text, std::string_view source) {
  Loaded<std::map<std::string, std::vector<std::string>>> out;
  out.report.source = std::string(source);
  const auto rows = ReadRows(text, FileFormat::kCsv,
                             {"district", "standard_name"}, out.report);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : rows) {
    ++out.report.rows_read;
    if (!row.error.empty()) {
      RecordError(out.report, row.line, row.error);
      continue;
    }
    const std::string& district = row.fields.at("district");
    const std::string& name = row.fields.at("standard_name");
    if (district.empty() || name.empty()) {
      RecordError(out.report, row.line, "empty registry field");
      continue;
    }
    if (seen.emplace(district, name).second) {
      out.value[district].push_back(name);
      ++out.report.rows_accepted;
    }
  }
  return out;
}

std::string AddressRecordsToCsv(const std::vector<AddressRecord>& records) {
  std::string out = "user_id,province,city,district,poi_name\n";
  for (const auto& r : records) {
    out += csv::JoinRow({r.user_id, r.province, r.city, r.district,
                         r.poi_name});
    out.push_back('\n');
  }
  return out;
}

std::string LocationLogToCsv(const LocationLog& log) {
  std::string out = "user_id,lat,lon\n";
  char buf[64];
  for (const auto& [user, points] : log) {
    const std::string id = csv::Escape(user);
    for (const auto& p : points) {
      out += id;
      out.push_back(',');
      auto r = std::to_chars(buf, buf + sizeof(buf), p.lat);
      out.append(buf, r.ptr);
      out.push_back(',');
      r = std::to_chars(buf, buf + sizeof(buf), p.lon);
      out.append(buf, r.ptr);
      out.push_back('\n');
    }
  }
  return out;
}

std::string LabelsToCsv(const std::vector<GroundTruthLabel>& labels) {
  std::string out = "district,standard_name,candidate_name,is_alias\n";
  for (const auto& l : labels) {
    out += csv::JoinRow({l.district, l.standard_name, l.candidate_name,
                         l.is_alias ? "1" : "0"});
    out.push_back('\n');
  }
  return out;
}

std::string StandardsToCsv(
    const std::map<std::string, std::vector<std::string>>& standards) {
  std::string out = "district,standard_name\n";
  for (const auto& [district, names] : standards) {
    for (const auto& name : names) {
      out += csv::JoinRow({district, name});
      out.push_back('\n');
    }
  }
  return out;
}

std::map<std::string, std::vector<AddressRecord>> PartitionByDistrict(
    const std::vector<AddressRecord>& records) {
  std::map<std::string, std::vector<AddressRecord>> out;
  for (const auto& r : records) out[r.district].push_back(r);
  return out;
}

void FinalizeCorpus(Corpus& corpus) {
  std::set<std::string> districts;
  std::map<std::string, std::set<std::string>> names_in;
  for (const auto& r : corpus.addresses) {
    districts.insert(r.district);
    names_in[r.district].insert(CleanText(r.poi_name));
  }
  for (const auto& l : corpus.labels) districts.insert(l.district);
  corpus.districts.assign(districts.begin(), districts.end());

  if (corpus.standards.empty()) {
    std::map<std::string, std::set<std::string>> derived;
    for (const auto& l : corpus.labels) {
      derived[l.district].insert(l.standard_name);
    }
    for (auto& [district, names] : derived) {
      corpus.standards[district].assign(names.begin(), names.end());
    }
  }

  corpus.orphan_labels.clear();
  for (const auto& l : corpus.labels) {
    const auto it = names_in.find(l.district);
    const bool known =
        it != names_in.end() && it->second.count(CleanText(l.standard_name)) &&
        it->second.count(CleanText(l.candidate_name));
    if (!known) corpus.orphan_labels.push_back(l);
  }
  if (!corpus.orphan_labels.empty()) {
    Log(LogLevel::kWarn, "orphan_labels",
        {{"count", std::to_string(corpus.orphan_labels.size())}});
  }
}

namespace {

std::filesystem::path FindInput(const std::filesystem::path& dir,
                                const std::string& stem, bool required) {
  for (const char* ext : {".csv", ".jsonl"}) {
    const auto p = dir / (stem + ext);
    if (std::filesystem::exists(p)) return p;
  }
  if (required) {
    throw Error(ErrorCode::kNotFound,
                "file not found: " + (dir / (stem + ".csv")).string());
  }
  return {};
}

}  // namespace

Corpus LoadCorpus(const std::filesystem::path& dir) {
  Corpus corpus;
  const auto addr_path = FindInput(dir, "addresses", true);
  const auto loc_path = FindInput(dir, "locations", true);
  const auto label_path = FindInput(dir, "labels", true);

  auto addresses = ParseAddressRecords(addr_path, FormatFromPath(addr_path));
  auto locations = ParseLocationLog(loc_path, FormatFromPath(loc_path));
  auto labels = ParseLabels(label_path, FormatFromPath(label_path));
  corpus.addresses = std::move(addresses.value);
  corpus.locations = std::move(locations.value);
  corpus.labels = std::move(labels.value);
  corpus.reports = {std::move(addresses.report), std::move(locations.report),
                    std::move(labels.report)};

  const auto registry = dir / "standards.csv";
  if (std::filesystem::exists(registry)) {
    auto standards = ParseStandardsText(ReadFile(registry), registry.string());
    corpus.standards = std::move(standards.value);
    corpus.reports.push_back(std::move(standards.report));
  }
  for (const auto& report : corpus.reports) {
    Log(LogLevel::kInfo, "loaded",
        {{"source", report.source},
         {"rows", std::to_string(report.rows_read)},
         {"accepted", std::to_string(report.rows_accepted)},
         {"errors", std::to_string(report.errors.size())},
         {"warnings", std::to_string(report.warnings.size())}});
  }
  FinalizeCorpus(corpus);
  return corpus;
}

}  // namespace poialias
