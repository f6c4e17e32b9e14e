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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heabench/error.hpp"

namespace heabench {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Basis-state convention: qubit 0 is the least-significant bit of the
/// basis-state index.
inline constexpr int kMaxQubits = 12;

namespace detail {

inline int qubits_for_dim(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim || dim == 0) {
    throw InvalidArgument("dimension " + std::to_string(dim) +
                          " is not a power of two");
  }
  return n;
}

inline void check_targets(std::span<const int> targets, int n_qubits,
                          std::size_t op_dim) {
  if (targets.empty()) throw InvalidArgument("empty target list");
  if ((std::size_t{1} << targets.size()) != op_dim) {
    throw InvalidArgument("operator dimension " + std::to_string(op_dim) +
                          " does not match " + std::to_string(targets.size()) +
                          " target qubit(s)");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits) {
      throw InvalidArgument("target qubit " + std::to_string(targets[i]) +
                            " out of range for " + std::to_string(n_qubits) +
                            " qubit(s)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw InvalidArgument("repeated target qubit " +
                              std::to_string(targets[i]));
      }
    }
  }
}

// Applies the local operator `op` to the `targets` of a 2^n vector whose
// elements sit `stride` apart in memory. Local basis index bit j belongs to
// targets[j].
inline void apply_local(Complex* data, std::ptrdiff_t stride, int n_qubits,
                        const CMatrix& op, std::span<const int> targets) {
  const std::size_t d = static_cast<std::size_t>(op.rows());
  std::vector<std::size_t> offsets(d);
  std::size_t mask = 0;
  for (std::size_t b = 0; b < d; ++b) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if ((b >> j) & 1U) off |= std::size_t{1} << targets[j];
    }
    offsets[b] = off;
  }
  for (int t : targets) mask |= std::size_t{1} << t;

  std::vector<Complex> in(d), out(d);
  const std::size_t dim = std::size_t{1} << n_qubits;
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t b = 0; b < d; ++b) {
      in[b] = data[static_cast<std::ptrdiff_t>(base + offsets[b]) * stride];
    }
    for (std::size_t r = 0; r < d; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < d; ++c) acc += op(r, c) * in[c];
      out[r] = acc;
    }
    for (std::size_t b = 0; b < d; ++b) {
      data[static_cast<std::ptrdiff_t>(base + offsets[b]) * stride] = out[b];
    }
  }
}

// rho -> op * rho * op^dagger, in place.
inline void conjugate_local(CMatrix& rho, int n_qubits, const CMatrix& op,
                            std::span<const int> targets) {
  const auto dim = rho.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    apply_local(rho.data() + c * dim, 1, n_qubits, op, targets);
  }
  const CMatrix op_conj = op.conjugate();
  for (Eigen::Index r = 0; r < dim; ++r) {
    apply_local(rho.data() + r, dim, n_qubits, op_conj, targets);
  }
}

// rho -> S(rho) for a local transfer matrix S indexed (r * d + c, a * d + b)
// over the targets' row and column indices, in place.
inline void apply_local_transfer(CMatrix& rho, int n_qubits, const CMatrix& transfer,
                                 std::span<const int> targets) {
  const std::size_t d = std::size_t{1} << targets.size();
  std::vector<std::size_t> offsets(d);
  std::size_t mask = 0;
  for (std::size_t b = 0; b < d; ++b) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if ((b >> j) & 1U) off |= std::size_t{1} << targets[j];
    }
    offsets[b] = off;
  }
  for (int t : targets) mask |= std::size_t{1} << t;

  const auto dd = static_cast<Eigen::Index>(d * d);
  CVector in(dd), out(dd);
  const std::size_t dim = std::size_t{1} << n_qubits;
  for (std::size_t rb = 0; rb < dim; ++rb) {
    if (rb & mask) continue;
    for (std::size_t cb = 0; cb < dim; ++cb) {
      if (cb & mask) continue;
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          in(static_cast<Eigen::Index>(r * d + c)) =
              rho(static_cast<Eigen::Index>(rb + offsets[r]),
                  static_cast<Eigen::Index>(cb + offsets[c]));
        }
      }
      out.noalias() = transfer * in;
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          rho(static_cast<Eigen::Index>(rb + offsets[r]),
              static_cast<Eigen::Index>(cb + offsets[c])) =
              out(static_cast<Eigen::Index>(r * d + c));
        }
      }
    }
  }
}

inline bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return ((u.adjoint() * u) - id).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

class KrausSet;

/// Pure state of n qubits as a dense amplitude vector.
class StateVector {
 public:
  /// |0...0> on `n_qubits` qubits.
  static StateVector zero(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
      throw InvalidArgument("qubit count " + std::to_string(n_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) +
                            "]");
    }
    CVector amps = CVector::Zero(Eigen::Index{1} << n_qubits);
    amps(0) = 1.0;
    return StateVector(n_qubits, std::move(amps));
  }

  /// Validates length (power of two) and normalization within `tol`.
  static StateVector from_amplitudes(CVector amps, double tol = 1e-10) {
    const int n = detail::qubits_for_dim(static_cast<std::size_t>(amps.size()));
    if (n < 1 || n > kMaxQubits) {
      throw InvalidArgument("state vector size outside supported range");
    }
    if (std::abs(amps.squaredNorm() - 1.0) > tol) {
      throw InvalidArgument("state vector is not normalized (norm^2 = " +
                            std::to_string(amps.squaredNorm()) + ")");
    }
    return StateVector(n, std::move(amps));
  }

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  const CVector& amplitudes() const noexcept { return amps_; }
  Complex operator[](Eigen::Index i) const { return amps_(i); }

  /// Computational-basis outcome probabilities |a_i|^2.
  Eigen::VectorXd probabilities() const { return amps_.cwiseAbs2(); }

 private:
  StateVector(int n, CVector amps) : n_qubits_(n), amps_(std::move(amps)) {}

  friend StateVector apply_gate(const StateVector&, const CMatrix&,
                                std::span<const int>);

  int n_qubits_;
  CVector amps_;
};

/// Mixed state of n qubits as a dense 2^n x 2^n matrix.
class DensityMatrix {
 public:
  static DensityMatrix zero(int n_qubits) {
    const auto psi = StateVector::zero(n_qubits);
    CMatrix m = CMatrix::Zero(psi.dim(), psi.dim());
    m(0, 0) = 1.0;
    return DensityMatrix(n_qubits, std::move(m));
  }

  /// I / 2^n.
  static DensityMatrix maximally_mixed(int n_qubits) {
    const auto psi = StateVector::zero(n_qubits);
    CMatrix m = CMatrix::Identity(psi.dim(), psi.dim()) /
                static_cast<double>(psi.dim());
    return DensityMatrix(n_qubits, std::move(m));
  }

  /// Checks Hermiticity and unit trace within `tol` and eigenvalues >= -1e-9.
  static DensityMatrix from_matrix(CMatrix m, double tol = 1e-10) {
    if (m.rows() != m.cols()) {
      throw InvalidArgument("density matrix must be square");
    }
    const int n = detail::qubits_for_dim(static_cast<std::size_t>(m.rows()));
    DensityMatrix rho(n, std::move(m));
    if (!rho.is_valid(tol)) {
      throw InvalidArgument("matrix is not a valid density matrix");
    }
    return rho;
  }

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }

  Complex trace() const { return m_.trace(); }
  double purity() const { return (m_ * m_).trace().real(); }
  Eigen::VectorXd probabilities() const { return m_.diagonal().real(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  bool is_valid(double tol = 1e-10) const {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(m_.trace() - Complex{1.0, 0.0}) > tol) return false;
    return min_eigenvalue() >= -1e-9;
  }

 private:
  DensityMatrix(int n, CMatrix m) : n_qubits_(n), m_(std::move(m)) {}

  friend DensityMatrix pure_to_density(const StateVector&);
  friend DensityMatrix apply_unitary(const DensityMatrix&, const CMatrix&,
                                     std::span<const int>);
  friend DensityMatrix apply_kraus(const DensityMatrix&, const KrausSet&,
                                   std::span<const int>);
  friend DensityMatrix apply_transfer(const DensityMatrix&, const CMatrix&,
                                      std::span<const int>);

  int n_qubits_;
  CMatrix m_;
};

/// Kraus representation of a CPTP map on `arity` qubits.
class KrausSet {
 public:
  explicit KrausSet(std::vector<CMatrix> ops, double tol = 1e-8)
      : ops_(std::move(ops)) {
    if (ops_.empty()) throw InvalidArgument("Kraus set has no operators");
    const auto d = ops_.front().rows();
    for (const auto& k : ops_) {
      if (k.rows() != d || k.cols() != d) {
        throw InvalidArgument("Kraus operators must share one square shape");
      }
    }
    arity_ = detail::qubits_for_dim(static_cast<std::size_t>(d));
    if (completeness_error() > tol) {
      throw InvalidArgument("Kraus completeness violated by " +
                            std::to_string(completeness_error()));
    }
  }

  static KrausSet identity(int arity) {
    const Eigen::Index d = Eigen::Index{1} << arity;
    return KrausSet({CMatrix::Identity(d, d)});
  }

  int arity() const noexcept { return arity_; }
  Eigen::Index dim() const noexcept { return ops_.front().rows(); }
  const std::vector<CMatrix>& operators() const noexcept { return ops_; }

  /// max |sum K^dagger K - I|.
  double completeness_error() const {
    const auto d = ops_.front().rows();
    CMatrix acc = CMatrix::Zero(d, d);
    for (const auto& k : ops_) acc += k.adjoint() * k;
    return (acc - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  }

  /// Choi matrix sum_ij |i><j| (x) E(|i><j|), local index first.
  CMatrix choi() const {
    const auto d = dim();
    CMatrix c = CMatrix::Zero(d * d, d * d);
    for (const auto& k : ops_) {
      CVector v(d * d);
      // vec of K in the (input, output) ordering: v[i*d + o] = K(o, i)
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index o = 0; o < d; ++o) v(i * d + o) = k(o, i);
      }
      c += v * v.adjoint();
    }
    return c;
  }

  /// Process (entanglement) fidelity with the identity: sum |Tr K|^2 / d^2.
  double process_fidelity() const {
    const double d = static_cast<double>(dim());
    double acc = 0.0;
    for (const auto& k : ops_) acc += std::norm(k.trace());
    return acc / (d * d);
  }

  /// 1 - average gate fidelity relative to the identity.
  double average_infidelity() const {
    const double d = static_cast<double>(dim());
    return d * (1.0 - process_fidelity()) / (d + 1.0);
  }

  /// Sum of K (x) conj(K): the channel as a d^2 x d^2 matrix acting on
  /// rho's entries flattened row-major.
  CMatrix transfer_matrix() const {
    const auto d = dim();
    CMatrix t = CMatrix::Zero(d * d, d * d);
    for (const auto& k : ops_) {
      const CMatrix kc = k.conjugate();
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index a = 0; a < d; ++a) {
          t.block(r * d, a * d, d, d) += k(r, a) * kc;
        }
      }
    }
    return t;
  }

  /// `second` applied after `first` (both on the same qubits).
  static KrausSet compose(const KrausSet& first, const KrausSet& second) {
    if (first.dim() != second.dim()) {
      throw InvalidArgument("cannot compose channels of different arity");
    }
    std::vector<CMatrix> ops;
    ops.reserve(first.ops_.size() * second.ops_.size());
    for (const auto& b : second.ops_) {
      for (const auto& a : first.ops_) ops.push_back(b * a);
    }
    return KrausSet(std::move(ops));
  }

  /// Channel acting as `low` on local qubit 0 and `high` on local qubit 1.
  static KrausSet tensor(const KrausSet& low, const KrausSet& high) {
    std::vector<CMatrix> ops;
    for (const auto& h : high.ops_) {
      for (const auto& l : low.ops_) {
        CMatrix k(h.rows() * l.rows(), h.cols() * l.cols());
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
          for (Eigen::Index j = 0; j < h.cols(); ++j) {
            k.block(i * l.rows(), j * l.cols(), l.rows(), l.cols()) =
                h(i, j) * l;
          }
        }
        ops.push_back(std::move(k));
      }
    }
    return KrausSet(std::move(ops));
  }

 private:
  std::vector<CMatrix> ops_;
  int arity_ = 0;
};

/// Embeds `unitary` on `targets` (local bit j <-> targets[j]).
inline StateVector apply_gate(const StateVector& state, const CMatrix& unitary,
                              std::span<const int> targets) {
  detail::check_targets(targets, state.n_qubits(),
                        static_cast<std::size_t>(unitary.rows()));
  if (!detail::is_unitary(unitary, 1e-8)) {
    throw InvalidArgument("gate matrix is not unitary");
  }
  StateVector out = state;
  detail::apply_local(out.amps_.data(), 1, out.n_qubits_, unitary, targets);
  return out;
}

inline StateVector apply_gate(const StateVector& state, const CMatrix& unitary,
                              std::initializer_list<int> targets) {
  return apply_gate(state, unitary,
                    std::span<const int>(targets.begin(), targets.size()));
}

/// rho -> U rho U^dagger.
inline DensityMatrix apply_unitary(const DensityMatrix& rho,
                                   const CMatrix& unitary,
                                   std::span<const int> targets) {
  detail::check_targets(targets, rho.n_qubits(),
                        static_cast<std::size_t>(unitary.rows()));
  if (!detail::is_unitary(unitary, 1e-8)) {
    throw InvalidArgument("gate matrix is not unitary");
  }
  DensityMatrix out = rho;
  detail::conjugate_local(out.m_, out.n_qubits_, unitary, targets);
  return out;
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho,
                                   const CMatrix& unitary,
                                   std::initializer_list<int> targets) {
  return apply_unitary(rho, unitary,
                       std::span<const int>(targets.begin(), targets.size()));
}

/// rho -> sum_i K_i rho K_i^dagger on `targets`.
inline DensityMatrix apply_kraus(const DensityMatrix& rho,
                                 const KrausSet& channel,
                                 std::span<const int> targets) {
  detail::check_targets(targets, rho.n_qubits(),
                        static_cast<std::size_t>(channel.dim()));
  const auto& ops = channel.operators();
  if (ops.size() == 1) {
    DensityMatrix out = rho;
    detail::conjugate_local(out.m_, out.n_qubits_, ops.front(), targets);
    return out;
  }
  CMatrix acc = CMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : ops) {
    CMatrix term = rho.m_;
    detail::conjugate_local(term, rho.n_qubits_, k, targets);
    acc += term;
  }
  return DensityMatrix(rho.n_qubits_, std::move(acc));
}

inline DensityMatrix apply_kraus(const DensityMatrix& rho,
                                 const KrausSet& channel,
                                 std::initializer_list<int> targets) {
  return apply_kraus(rho, channel,
                     std::span<const int>(targets.begin(), targets.size()));
}

/// Applies a channel given by its transfer matrix (see
/// KrausSet::transfer_matrix) on `targets`.
inline DensityMatrix apply_transfer(const DensityMatrix& rho, const CMatrix& transfer,
                                    std::span<const int> targets) {
  const std::size_t d = std::size_t{1} << targets.size();
  detail::check_targets(targets, rho.n_qubits(), d);
  if (transfer.rows() != static_cast<Eigen::Index>(d * d) ||
      transfer.cols() != transfer.rows()) {
    throw InvalidArgument("transfer matrix does not match the target count");
  }
  DensityMatrix out = rho;
  detail::apply_local_transfer(out.m_, out.n_qubits_, transfer, targets);
  return out;
}

/// |psi><psi|.
inline DensityMatrix pure_to_density(const StateVector& psi) {
  if (std::abs(psi.amplitudes().squaredNorm() - 1.0) > 1e-10) {
    throw InvalidArgument("state vector is not normalized");
  }
  return DensityMatrix(psi.n_qubits(),
                       psi.amplitudes() * psi.amplitudes().adjoint());
}

namespace detail {

inline void check_same_size(int a, int b) {
  if (a != b) {
    throw InvalidArgument("fidelity between states of " + std::to_string(a) +
                          " and " + std::to_string(b) + " qubits");
  }
}

inline double clamp_unit(double f) { return std::clamp(f, 0.0, 1.0); }

// Eigenvalues below this fraction of the largest are treated as round-off.
inline constexpr double kRoundoffEigen = 1e-13;

inline Eigen::VectorXd roundoff_clipped(Eigen::VectorXd ev) {
  const double cut = kRoundoffEigen * std::max(ev.maxCoeff(), 0.0);
  for (auto& x : ev) x = x > cut ? x : 0.0;
  return ev;
}

// Hermitian square root with round-off eigenvalues clipped.
inline CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const Eigen::VectorXd ev = roundoff_clipped(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// |<a|b>|^2.
inline double fidelity(const StateVector& a, const StateVector& b) {
  detail::check_same_size(a.n_qubits(), b.n_qubits());
  return detail::clamp_unit(std::norm(a.amplitudes().dot(b.amplitudes())));
}

/// <psi|rho|psi>.
inline double fidelity(const StateVector& psi, const DensityMatrix& rho) {
  detail::check_same_size(psi.n_qubits(), rho.n_qubits());
  const auto& v = psi.amplitudes();
  return detail::clamp_unit((v.adjoint() * rho.matrix() * v)(0, 0).real());
}

inline double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  return fidelity(psi, rho);
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  detail::check_same_size(rho.n_qubits(), sigma.n_qubits());
  const CMatrix s = detail::psd_sqrt(rho.matrix());
  CMatrix inner = s * sigma.matrix() * s;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(inner, Eigen::EigenvaluesOnly);
  const double root_trace = detail::roundoff_clipped(es.eigenvalues()).cwiseSqrt().sum();
  return detail::clamp_unit(root_trace * root_trace);
}

}  // namespace heabench
