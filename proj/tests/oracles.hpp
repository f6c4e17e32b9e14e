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

// Brute-force reference constructions shared by the unit tests. Nothing here
// calls into the library's kernels.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Full 2^n x 2^n operator of a k-qubit gate, built entry by entry: local
/// bit j of the gate index maps to qubit targets[j].
inline CMatrix embed(const CMatrix& op, const std::vector<int>& targets, int n) {
  const int dim = 1 << n;
  CMatrix full = CMatrix::Zero(dim, dim);
  auto local = [&](int idx) {
    int l = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) l |= ((idx >> targets[j]) & 1) << j;
    return l;
  };
  int mask = 0;
  for (int t : targets) mask |= 1 << t;
  for (int row = 0; row < dim; ++row) {
    for (int col = 0; col < dim; ++col) {
      if ((row & ~mask) != (col & ~mask)) continue;
      full(row, col) = op(local(row), local(col));
    }
  }
  return full;
}

/// sum_k K rho K^dagger with each K embedded entry-wise on `targets`.
inline CMatrix embed_channel(const std::vector<CMatrix>& ops, const std::vector<int>& targets,
                             int n, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : ops) {
    const CMatrix e = embed(k, targets, n);
    out += e * rho * e.adjoint();
  }
  return out;
}

inline CMatrix ry(double t) {
  CMatrix m(2, 2);
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}
inline CMatrix rx(double t) {
  const Complex i(0, 1);
  CMatrix m(2, 2);
  m << std::cos(t / 2), -i * std::sin(t / 2), -i * std::sin(t / 2), std::cos(t / 2);
  return m;
}
inline CMatrix rz(double t) {
  const Complex i(0, 1);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-i * t / 2.0);
  m(1, 1) = std::exp(i * t / 2.0);
  return m;
}
inline CMatrix hadamard() {
  CMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}
inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
/// Control is local bit 0, target local bit 1.
inline CMatrix cx() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(2, 2) = 1;
  m(3, 1) = m(1, 3) = 1;
  return m;
}
inline CMatrix cz() {
  CMatrix m = CMatrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

/// Dense matrix of a Pauli string; last character acts on qubit 0.
inline CMatrix pauli_string(const std::string& s) {
  const Complex i(0, 1);
  CMatrix out = CMatrix::Ones(1, 1);
  for (char ch : s) {
    CMatrix p(2, 2);
    switch (ch) {
      case 'X': p << 0, 1, 1, 0; break;
      case 'Y': p << 0, -i, i, 0; break;
      case 'Z': p << 1, 0, 0, -1; break;
      default: p << 1, 0, 0, 1; break;
    }
    out = Eigen::kroneckerProduct(out, p).eval();
  }
  return out;
}

/// Fermionic annihilation operator a_p on n modes; occupation of mode p is
/// bit p of the basis index, sign from occupied modes below p.
inline Eigen::MatrixXd annihilator(int p, int n) {
  const int dim = 1 << n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int occ = 0; occ < dim; ++occ) {
    if (!((occ >> p) & 1)) continue;
    int below = 0;
    for (int j = 0; j < p; ++j) below += (occ >> j) & 1;
    a(occ ^ (1 << p), occ) = (below % 2) ? -1.0 : 1.0;
  }
  return a;
}

/// nuc + sum h_pq a+p aq + 1/2 sum g_pqrs a+p a+q ar as.
template <typename G>
Eigen::MatrixXd fermion_hamiltonian(int n, const Eigen::MatrixXd& h, G&& g, double nuc) {
  const int dim = 1 << n;
  std::vector<Eigen::MatrixXd> a;
  for (int p = 0; p < n; ++p) a.push_back(annihilator(p, n));
  Eigen::MatrixXd out = nuc * Eigen::MatrixXd::Identity(dim, dim);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) out += h(p, q) * a[p].transpose() * a[q];
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = g(p, q, r, s);
          if (v != 0.0) out += 0.5 * v * a[p].transpose() * a[q].transpose() * a[r] * a[s];
        }
  return out;
}

/// Single-qubit Lindblad evolution with decay 1/T1 and pure dephasing rate
/// 1/T2 - 1/(2 T1), via the exponential of the vectorized generator.
inline CMatrix lindblad_relax(const CMatrix& rho, double t1, double t2, double t) {
  const Complex i(0, 1);
  CMatrix sm = CMatrix::Zero(2, 2);
  sm(0, 1) = 1;
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  const double gamma1 = std::isinf(t1) ? 0.0 : 1.0 / t1;
  const double gphi = (std::isinf(t2) ? 0.0 : 1.0 / t2) - gamma1 / 2.0;
  std::vector<CMatrix> ls = {std::sqrt(gamma1) * sm, std::sqrt(gphi / 2.0) * z};
  const CMatrix id = CMatrix::Identity(2, 2);
  // Column-stacking: vec(A X B) = (B^T kron A) vec(X).
  CMatrix gen = CMatrix::Zero(4, 4);
  for (const auto& l : ls) {
    const CMatrix ldl = l.adjoint() * l;
    gen += Eigen::kroneckerProduct(l.conjugate(), l).eval();
    gen -= 0.5 * Eigen::kroneckerProduct(id, ldl).eval();
    gen -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval();
  }
  const CMatrix prop = (gen * t).exp();
  CVector v(4);
  v << rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1);
  const CVector w = prop * v;
  CMatrix out(2, 2);
  out << w(0), w(2), w(1), w(3);
  return out;
}

inline CVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(1 << n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v.normalized();
}

inline CMatrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const int d = 1 << n;
  CMatrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace oracle
