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

// Random inputs and their oracle matrices, shared by unit and acceptance tests.

#pragma once

#include <array>
#include <random>
#include <vector>

#include "heabench/hamiltonian.hpp"
#include "oracles.hpp"

namespace fixture {

using heabench::IntegralSet;

/// Random real integrals with the 8-fold symmetry of chemist (ps|qr).
inline IntegralSet random_integrals(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto s = IntegralSet::zeros(n);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) s.one_body(p, q) = s.one_body(q, p) = g(rng);
  std::vector<double> chem(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto at = [&](int i, int j, int k, int l) -> double& {
    return chem[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (at(i, j, k, l) != 0.0) continue;
          const double v = g(rng);
          for (auto [a, b, c, d] : {std::array{i, j, k, l}, std::array{j, i, k, l},
                                    std::array{i, j, l, k}, std::array{j, i, l, k},
                                    std::array{k, l, i, j}, std::array{l, k, i, j},
                                    std::array{k, l, j, i}, std::array{l, k, j, i}}) {
            at(a, b, c, d) = v;
          }
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int t = 0; t < n; ++t) s.g(p, q, r, t) = at(p, t, q, r);
  s.nuclear_repulsion = g(rng);
  return s;
}

inline Eigen::MatrixXd oracle_matrix(const IntegralSet& s) {
  return oracle::fermion_hamiltonian(
      s.n_spin_orbitals, s.one_body,
      [&](int p, int q, int r, int t) { return s.g(p, q, r, t); }, s.nuclear_repulsion);
}

}  // namespace fixture
