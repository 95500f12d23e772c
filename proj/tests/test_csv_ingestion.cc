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

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "poialias/csv.h"
#include "poialias/error.h"
#include "poialias/ingestion.h"

namespace poialias {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("poialias_ingest_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

TEST(Csv, QuotedFieldsAndCrlf) {
  const auto rows = csv::Parse("a,\"b,c\",\"d\"\"e\"\r\n\r\n1,\"x\ny\",3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"1", "x\ny", "3"}));
  EXPECT_EQ(rows[1].line, 3u);
}

TEST(Csv, BomAndUnterminatedQuote) {
  const auto rows = csv::Parse("\xEF\xBB\xBFh1,h2\n\"open,2\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].fields[0], "h1");
  EXPECT_TRUE(rows[1].malformed);
}

TEST(Csv, EscapeRoundTrip) {
  const std::vector<std::string> fields{"plain", "com,ma", "quo\"te", "new\nline",
                                        ""};
  const auto rows = csv::Parse(csv::JoinRow(fields) + "\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fields, fields);
}

TEST(Addresses, ParsesRow) {
  const auto loaded = ParseAddressRecordsText(
      "user_id,province,city,district,poi_name\n"
      "u1,Jiangsu,Suzhou,Huqiu,XiGuYaYuan\n",
      FileFormat::kCsv);
  ASSERT_EQ(loaded.value.size(), 1u);
  EXPECT_EQ(loaded.value[0],
            (AddressRecord{"u1", "Jiangsu", "Suzhou", "Huqiu", "XiGuYaYuan"}));
  EXPECT_TRUE(loaded.report.errors.empty());
}

TEST(Addresses, EmptyFileIsEmptyList) {
  const auto loaded = ParseAddressRecordsText("", FileFormat::kCsv);
  EXPECT_TRUE(loaded.value.empty());
  EXPECT_TRUE(loaded.report.errors.empty());
}

TEST(Addresses, EmptyPoiNameIsReported) {
  const auto loaded = ParseAddressRecordsText(
      "user_id,province,city,district,poi_name\n"
      "u1,Jiangsu,Suzhou,Huqiu,\n"
      "u2,Jiangsu,Suzhou,Huqiu,XiGuYaYuan\n",
      FileFormat::kCsv);
  EXPECT_EQ(loaded.value.size(), 1u);
  ASSERT_EQ(loaded.report.errors.size(), 1u);
  EXPECT_EQ(loaded.report.errors[0].row, 2u);
  EXPECT_EQ(loaded.report.rows_read, 2u);
  EXPECT_EQ(loaded.report.rows_accepted, 1u);
}

TEST(Addresses, WrongFieldCountIsReported) {
  const auto loaded = ParseAddressRecordsText(
      "user_id,province,city,district,poi_name\nu1,Jiangsu,Suzhou\n",
      FileFormat::kCsv);
  EXPECT_TRUE(loaded.value.empty());
  EXPECT_EQ(loaded.report.errors.size(), 1u);
}

TEST(Addresses, MissingHeaderColumnThrows) {
  EXPECT_THROW(ParseAddressRecordsText("user_id,province\nu1,x\n",
                                       FileFormat::kCsv),
               Error);
}

TEST(Addresses, JsonlMirror) {
  const auto loaded = ParseAddressRecordsText(
      "{\"user_id\":\"u1\",\"province\":\"Jiangsu\",\"city\":\"Suzhou\","
      "\"district\":\"Huqiu\",\"poi_name\":\"XiGuYaYuan\"}\n"
      "not json\n",
      FileFormat::kJsonl);
  ASSERT_EQ(loaded.value.size(), 1u);
  EXPECT_EQ(loaded.value[0].poi_name, "XiGuYaYuan");
  EXPECT_EQ(loaded.report.errors.size(), 1u);
}

TEST(Addresses, RoundTrip) {
  const std::vector<AddressRecord> records{
      {"u1", "Jiangsu", "Suzhou", "Huqiu", "Xi,Gu \"Ya\" Yuan"},
      {"u2", "Jiangsu", "Suzhou", "Gusu", "LangShiLvZhou"}};
  const auto loaded =
      ParseAddressRecordsText(AddressRecordsToCsv(records), FileFormat::kCsv);
  EXPECT_EQ(loaded.value, records);
}

TEST(Locations, PreservesFileOrder) {
  const auto loaded = ParseLocationLogText(
      "user_id,lat,lon\nu1,31.30,120.57\nu1,31.31,120.58\n", FileFormat::kCsv);
  ASSERT_EQ(loaded.value.size(), 1u);
  const auto& pts = loaded.value.at("u1");
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (GeoPoint{31.30, 120.57}));
  EXPECT_EQ(pts[1], (GeoPoint{31.31, 120.58}));
}

TEST(Locations, OutOfRangeRejected) {
  const auto loaded = ParseLocationLogText(
      "user_id,lat,lon\nu2,95.0,120.0\nu2,abc,1\nu3,1,2\n", FileFormat::kCsv);
  EXPECT_EQ(loaded.report.errors.size(), 2u);
  EXPECT_EQ(loaded.value.count("u2"), 0u);
  EXPECT_EQ(loaded.value.count("u3"), 1u);
}

TEST(Locations, CountsMatchLineCountingOracle) {
  std::string text = "user_id,lat,lon\n";
  std::mt19937_64 rng(1);
  std::map<std::string, std::size_t> expected;
  for (int i = 0; i < 200; ++i) {
    const std::string user = "u" + std::to_string(rng() % 17);
    text += user + ",31." + std::to_string(rng() % 1000) + ",120.5\n";
    ++expected[user];
  }
  const auto loaded = ParseLocationLogText(text, FileFormat::kCsv);
  ASSERT_EQ(loaded.value.size(), expected.size());
  for (const auto& [user, n] : expected) {
    EXPECT_EQ(loaded.value.at(user).size(), n);
  }
}

TEST(Locations, RoundTrip) {
  LocationLog log;
  log["a"] = {{31.123456789012345, 120.5}, {-0.1, 179.99999}};
  log["b"] = {{1e-7, -1e-7}};
  const auto loaded =
      ParseLocationLogText(LocationLogToCsv(log), FileFormat::kCsv);
  EXPECT_EQ(loaded.value, log);
}

TEST(Labels, PositiveLabel) {
  const auto loaded = ParseLabelsText(
      "district,standard_name,candidate_name,is_alias\n"
      "Huqiu,XiGuYaYuan,LangShiLvZhou,1\n",
      FileFormat::kCsv);
  ASSERT_EQ(loaded.value.size(), 1u);
  EXPECT_TRUE(loaded.value[0].is_alias);
}

TEST(Labels, DuplicateDeduplicatedWithWarning) {
  const auto loaded = ParseLabelsText(
      "district,standard_name,candidate_name,is_alias\n"
      "Huqiu,XiGuYaYuan,LangShiLvZhou,1\n"
      "Huqiu,XiGuYaYuan,LangShiLvZhou,1\n",
      FileFormat::kCsv);
  EXPECT_EQ(loaded.value.size(), 1u);
  EXPECT_EQ(loaded.report.warnings.size(), 1u);
}

TEST(Labels, ConflictNamesTheTriple) {
  try {
    ParseLabelsText(
        "district,standard_name,candidate_name,is_alias\n"
        "Huqiu,XiGuYaYuan,LangShiLvZhou,0\n"
        "Huqiu,XiGuYaYuan,LangShiLvZhou,1\n",
        FileFormat::kCsv);
    FAIL() << "expected a conflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
    EXPECT_NE(std::string(e.what()).find("XiGuYaYuan"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("LangShiLvZhou"), std::string::npos);
  }
}

TEST(Labels, SelfPairRejected) {
  const auto loaded = ParseLabelsText(
      "district,standard_name,candidate_name,is_alias\n"
      "Huqiu,XiGu YaYuan,xiguyayuan,1\n"
      "Huqiu,A,B,2\n",
      FileFormat::kCsv);
  EXPECT_TRUE(loaded.value.empty());
  EXPECT_EQ(loaded.report.errors.size(), 2u);
}

TEST(Labels, RoundTrip) {
  const std::vector<GroundTruthLabel> labels{{"D1", "A", "B", true},
                                             {"D1", "A", "C", false}};
  EXPECT_EQ(ParseLabelsText(LabelsToCsv(labels), FileFormat::kCsv).value,
            labels);
}

TEST(Partition, DisjointCover) {
  const std::vector<AddressRecord> records{{"u1", "p", "c", "A", "x"},
                                           {"u2", "p", "c", "B", "y"},
                                           {"u3", "p", "c", "A", "z"}};
  const auto parts = PartitionByDistrict(records);
  std::size_t total = 0;
  for (const auto& [d, recs] : parts) {
    for (const auto& r : recs) EXPECT_EQ(r.district, d);
    total += recs.size();
  }
  EXPECT_EQ(total, records.size());
  EXPECT_EQ(parts.at("A").size(), 2u);
}

TEST(LoadCorpus, MissingLocationsNamesPath) {
  const fs::path dir = TempDir("missing");
  WriteText(dir / "addresses.csv", "user_id,province,city,district,poi_name\n");
  WriteText(dir / "labels.csv", "district,standard_name,candidate_name,is_alias\n");
  try {
    LoadCorpus(dir);
    FAIL() << "expected not-found";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
    EXPECT_NE(std::string(e.what()).find("locations"), std::string::npos);
  }
}

TEST(LoadCorpus, OrphansAndDerivedRegistry) {
  const fs::path dir = TempDir("orphans");
  WriteText(dir / "addresses.csv",
            "user_id,province,city,district,poi_name\n"
            "u1,p,c,D1,Alpha\nu2,p,c,D1,Beta\n");
  WriteText(dir / "locations.jsonl",
            "{\"user_id\":\"u1\",\"lat\":31.3,\"lon\":120.5}\n");
  WriteText(dir / "labels.csv",
            "district,standard_name,candidate_name,is_alias\n"
            "D1,Alpha,Beta,1\nD1,Alpha,Gamma,0\n");
  const Corpus corpus = LoadCorpus(dir);
  EXPECT_EQ(corpus.districts, std::vector<std::string>{"D1"});
  EXPECT_EQ(corpus.locations.at("u1").size(), 1u);
  ASSERT_EQ(corpus.orphan_labels.size(), 1u);
  EXPECT_EQ(corpus.orphan_labels[0].candidate_name, "Gamma");
  EXPECT_EQ(corpus.standards.at("D1"), std::vector<std::string>{"Alpha"});
}

TEST(LoadCorpus, DeterministicReports) {
  const fs::path dir = TempDir("determinism");
  WriteText(dir / "addresses.csv",
            "user_id,province,city,district,poi_name\nu1,p,c,D1,A\nbad\n");
  WriteText(dir / "locations.csv", "user_id,lat,lon\nu1,1,2\nu1,100,2\n");
  WriteText(dir / "labels.csv", "district,standard_name,candidate_name,is_alias\n");
  const Corpus a = LoadCorpus(dir), b = LoadCorpus(dir);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    EXPECT_EQ(a.reports[i].errors.size(), b.reports[i].errors.size());
    EXPECT_EQ(a.reports[i].rows_accepted, b.reports[i].rows_accepted);
  }
  EXPECT_EQ(a.addresses, b.addresses);
  EXPECT_EQ(a.locations, b.locations);
}

}  // namespace
}  // namespace poialias
