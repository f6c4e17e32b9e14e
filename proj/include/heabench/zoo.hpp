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

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "heabench/circuit.hpp"
#include "heabench/io.hpp"

namespace heabench {

inline constexpr int kZooSize = 12;

/// Family names used in sweep plots; ids 3-8 mix CX and CZ on the RY design.
inline std::string_view zoo_family_name(int id) {
  static constexpr std::array<std::string_view, kZooSize> names = {
      "RY_CX",  "RY_CZ",  "RY_MIX", "RY_MIX",  "RY_MIX",  "RY_MIX",
      "RY_MIX", "RY_MIX", "HRX_CX", "HRX_CZ", "RYRZ_CZ", "RYRZ_CX"};
  if (id < 1 || id > kZooSize) {
    throw InvalidArgument("zoo circuit id " + std::to_string(id) +
                          " outside 1.." + std::to_string(kZooSize));
  }
  return names[static_cast<std::size_t>(id - 1)];
}

inline std::filesystem::path zoo_circuit_path(
    int id, const std::filesystem::path& data_dir = default_data_dir()) {
  zoo_family_name(id);  // range check
  return data_dir / "circuits" / ("zoo_" + std::to_string(id) + ".circ");
}

/// Loads zoo circuit `id` (1..12) from its shipped description file. The
/// label is the decimal id.
inline ParameterizedCircuit zoo_circuit(
    int id, const std::filesystem::path& data_dir = default_data_dir()) {
  const auto path = zoo_circuit_path(id, data_dir);
  return load_circuit(read_text_file(path), std::to_string(id));
}

}  // namespace heabench
