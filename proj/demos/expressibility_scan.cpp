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

// Expressibility of every zoo circuit under both angle samplers.

#include <fmt/format.h>

#include "heabench.hpp"

using namespace heabench;

int main() {
  fmt::print("{:>7} {:>16} {:>9} {:>11}\n", "circuit", "entanglers", "uniform", "nonuniform");
  for (int id = 1; id <= 12; ++id) {
    const auto c = zoo_circuit(id);
    ExpressibilityOptions opt;
    opt.seed = 1;
    opt.jobs = default_jobs();
    const double u = estimate_expressibility(c, opt).value;
    opt.sampler = Sampler::NonUniform;
    const double n = estimate_expressibility(c, opt).value;
    fmt::print("{:>7} {:>16} {:>9.4f} {:>11.4f}\n", id, c.entangler_signature(), u, n);
  }
}
