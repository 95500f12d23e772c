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

#include "poialias/artifacts.h"

#include <fstream>
#include <system_error>

#include <unistd.h>

#include "poialias/error.h"

namespace poialias {

namespace {

std::filesystem::path TempSibling(const std::filesystem::path& path) {
  return path.string() + ".tmp-" + std::to_string(::getpid());
}

void WriteRaw(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content) {
  const auto tmp = TempSibling(path);
  WriteRaw(tmp, content);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename into " + path.string());
  }
}

std::vector<std::filesystem::path> ArtifactSet::Commit() {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create output directory " + dir_.string());
  }
  std::vector<std::filesystem::path> temps;
  try {
    for (const auto& [name, content] : files_) {
      const auto parent = (dir_ / name).parent_path();
      std::filesystem::create_directories(parent, ec);
      if (ec) throw Error(ErrorCode::kIo, "cannot create " + parent.string());
      temps.push_back(TempSibling(dir_ / name));
      WriteRaw(temps.back(), content);
    }
  } catch (...) {
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    throw;
  }
  std::vector<std::filesystem::path> committed;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const auto target = dir_ / files_[i].first;
    std::filesystem::rename(temps[i], target, ec);
    if (ec) {
      for (std::size_t k = i; k < temps.size(); ++k) {
        std::filesystem::remove(temps[k], ec);
      }
      throw Error(ErrorCode::kIo, "cannot rename into " + target.string());
    }
    committed.push_back(target);
  }
  files_.clear();
  return committed;
}

}  // namespace poialias
