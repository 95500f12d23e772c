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

#ifndef POIALIAS_ARTIFACTS_H_
#define POIALIAS_ARTIFACTS_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace poialias {

// Collects output files in memory and publishes them together: every file is
// first written to a temporary sibling, then all are renamed into place. A
// failure before Commit() leaves the output directory untouched.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void Add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  // Returns the committed paths.
  std::vector<std::filesystem::path> Commit();

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace poialias

#endif  // POIALIAS_ARTIFACTS_H_
