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

#ifndef POIALIAS_CSV_H_
#define POIALIAS_CSV_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace poialias::csv {

struct Row {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
  bool malformed = false;  // unterminated quote or stray quote
};

// RFC-4180 reader: quoted fields may contain commas, doubled quotes and line
// breaks. Accepts LF or CRLF records and skips a leading UTF-8 BOM. Blank
// lines are dropped.
std::vector<Row> Parse(std::string_view text);

// Quotes the field when it contains a comma, quote or line break.
std::string Escape(std::string_view field);

std::string JoinRow(const std::vector<std::string>& fields);

}  // namespace poialias::csv

#endif  // POIALIAS_CSV_H_
