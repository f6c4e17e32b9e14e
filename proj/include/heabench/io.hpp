// Copyright 2026 The heabench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "heabench/error.hpp"

#ifndef HEABENCH_DATA_DIR
#define HEABENCH_DATA_DIR "data"
#endif

namespace heabench {

/// Root of the shipped data tree (circuits/, calibrations/, hamiltonians/,
/// integrals/). Fixed at build time.
inline std::filesystem::path default_data_dir() {
  return std::filesystem::path(HEABENCH_DATA_DIR);
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("error reading file: " + path.string());
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write file: " + path.string());
  out << text;
  if (!out) throw FileError("error writing file: " + path.string());
}

}  // namespace heabench
