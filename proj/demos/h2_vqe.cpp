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

// Ideal and noisy VQE on H2 for one zoo circuit.
//
//   h2_vqe [circuit-id] [calibration-name]

#include <cstdlib>
#include <string>

#include <fmt/format.h>

#include "heabench.hpp"

using namespace heabench;

int main(int argc, char** argv) {
  const int id = argc > 1 ? std::atoi(argv[1]) : 2;
  const std::string device = argc > 2 ? argv[2] : "ibmqx2-like";
  const auto data = default_data_dir();

  const auto h = parse_hamiltonian(read_text_file(data / "hamiltonians" / "h2_sto3g_0735.ham"));
  const double e0 = exact_ground_energy(h);
  const auto circuit = zoo_circuit(id, data);
  const auto noise = build_noise_model(
      parse_calibration(read_text_file(data / "calibrations" / (device + ".cal"))));
  fmt::print("circuit {} ({} parameters), exact ground {:.6f} Ha\n", circuit.label(),
             circuit.n_parameters(), e0);

  for (const NoiseModel* model : {static_cast<const NoiseModel*>(nullptr), &noise}) {
    SPSAConfig cfg;
    cfg.seed = 7;
    const auto r = run_vqe(circuit, h, cfg, 1024, model, e0);
    fmt::print("{:>12}: best {:.6f} +/- {:.6f}, diff {:.4f} after {} evaluations\n",
               model ? model->name() : "ideal", r.best_energy, r.best_standard_error,
               r.energy_difference, r.evaluations_used);
  }
}
