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

// Short VQE sweep over two synthetic devices, printing each device's
// circuit ordering by median energy difference.

#include <vector>

#include <fmt/format.h>

#include "heabench.hpp"

using namespace heabench;

int main() {
  const auto data = default_data_dir();
  const auto h = parse_hamiltonian(read_text_file(data / "hamiltonians" / "h2_sto3g_0735.ham"));

  std::vector<NoiseModel> models;
  for (const char* d : {"vigo-like", "valencia-like"}) {
    models.push_back(build_noise_model(
        parse_calibration(read_text_file(data / "calibrations" / (std::string(d) + ".cal")))));
  }
  std::vector<ParameterizedCircuit> circuits;
  for (int id : default_sweep_circuits()) circuits.push_back(zoo_circuit(id, data));

  VQESettings s;
  s.spsa.max_iterations = 60;
  s.seeds = seed_list(1, 3);
  s.reference_energy = exact_ground_energy(h);
  s.jobs = default_jobs();
  const auto rows = noise_model_sweep(circuits, models, h, s);
  fmt::print("{}", sweep_csv(rows));
  for (const auto& [model, order] : sweep_orderings(rows)) {
    fmt::print("{}:", model);
    for (const auto& l : order) fmt::print(" {}", l);
    fmt::print("\n");
  }
}
