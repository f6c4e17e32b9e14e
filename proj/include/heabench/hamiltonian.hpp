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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "heabench/circuit.hpp"
#include "heabench/error.hpp"
#include "heabench/noise.hpp"
#include "heabench/rng.hpp"
#include "heabench/state.hpp"

namespace heabench {

/// Weighted Pauli string. The string is written big-endian: its last
/// character acts on qubit 0, matching the bit order of basis indices.
class PauliTerm {
 public:
  PauliTerm(double coefficient, std::string paulis)
      : coefficient_(coefficient), paulis_(std::move(paulis)) {
    if (!std::isfinite(coefficient_)) {
      throw InvalidArgument("non-finite Pauli coefficient");
    }
    if (paulis_.empty() || static_cast<int>(paulis_.size()) > kMaxQubits) {
      throw InvalidArgument("Pauli string length out of range");
    }
    const auto n = paulis_.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto& ch = paulis_[i];
      ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      const std::uint32_t bit = 1U << (n - 1 - i);
      switch (ch) {
        case 'I': break;
        case 'X': x_mask_ |= bit; break;
        case 'Y': x_mask_ |= bit; z_mask_ |= bit; break;
        case 'Z': z_mask_ |= bit; break;
        default:
          throw InvalidArgument(std::string("invalid Pauli letter '") + ch + "'");
      }
    }
  }

  double coefficient() const noexcept { return coefficient_; }
  const std::string& paulis() const noexcept { return paulis_; }
  int n_qubits() const noexcept { return static_cast<int>(paulis_.size()); }

  /// Bit q set where the operator on qubit q is X or Y.
  std::uint32_t x_mask() const noexcept { return x_mask_; }
  /// Bit q set where the operator on qubit q is Z or Y.
  std::uint32_t z_mask() const noexcept { return z_mask_; }
  std::uint32_t support() const noexcept { return x_mask_ | z_mask_; }
  bool is_identity() const noexcept { return support() == 0; }

  /// Operator letter on qubit q.
  char op_on(int q) const {
    return paulis_[paulis_.size() - 1 - static_cast<std::size_t>(q)];
  }

  // P|i> = phase(i) |i ^ x_mask>
  Complex phase(std::uint32_t i) const {
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int ny = std::popcount(x_mask_ & z_mask_);
    const int sign = std::popcount(i & z_mask_) & 1;
    Complex ph = ipow[ny & 3];
    return sign ? -ph : ph;
  }

  /// Dense matrix of the bare Pauli string (coefficient not applied).
  CMatrix matrix() const {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits();
    CMatrix m = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto col = static_cast<std::uint32_t>(i);
      m(col ^ x_mask_, col) = phase(col);
    }
    return m;
  }

 private:
  double coefficient_;
  std::string paulis_;
  std::uint32_t x_mask_ = 0;
  std::uint32_t z_mask_ = 0;
};

/// H = sum_a h_a P_a over a fixed qubit count. Canonical: no duplicate
/// strings, no coefficients below 1e-12 in magnitude, sorted by string.
class PauliHamiltonian {
 public:
  PauliHamiltonian(int n_qubits, const std::vector<PauliTerm>& terms)
      : n_qubits_(n_qubits) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) {
      throw InvalidArgument("Hamiltonian qubit count out of range");
    }
    std::map<std::string, double> merged;
    for (const auto& t : terms) {
      if (t.n_qubits() != n_qubits_) {
        throw InvalidArgument("Pauli string '" + t.paulis() +
                              "' does not have length " + std::to_string(n_qubits_));
      }
      merged[t.paulis()] += t.coefficient();
    }
    for (const auto& [s, c] : merged) {
      if (std::abs(c) >= 1e-12) terms_.emplace_back(c, s);
    }
  }

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

  double identity_coefficient() const {
    for (const auto& t : terms_) {
      if (t.is_identity()) return t.coefficient();
    }
    return 0.0;
  }

  CMatrix matrix() const {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const auto& t : terms_) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        const auto col = static_cast<std::uint32_t>(i);
        m(col ^ t.x_mask(), col) += t.coefficient() * t.phase(col);
      }
    }
    return m;
  }

  /// One `<coefficient> <pauli-string>` line per term, full precision.
  std::string to_text() const {
    std::string out;
    for (const auto& t : terms_) {
      out += fmt::format("{:.17g} {}\n", t.coefficient(), t.paulis());
    }
    return out;
  }

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// Parses `<coefficient> <pauli-string>` lines; `#` starts a comment. The
/// string length fixes the qubit count.
inline PauliHamiltonian parse_hamiltonian(std::string_view text) {
  std::vector<PauliTerm> terms;
  std::optional<int> n;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto toks =
        detail::split_ws(detail::strip_comment(text.substr(pos, eol - pos)));
    pos = eol + 1;
    ++line_no;
    if (toks.empty()) continue;
    if (toks.size() != 2) {
      throw ParseError("expected '<coefficient> <pauli-string>'", line_no);
    }
    const double c = detail::parse_real(toks[0], line_no);
    if (!std::isfinite(c)) throw ParseError("non-finite coefficient", line_no);
    try {
      terms.emplace_back(c, std::string(toks[1]));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!n) n = terms.back().n_qubits();
    if (terms.back().n_qubits() != *n) {
      throw ParseError("Pauli string length differs from earlier terms", line_no);
    }
  }
  if (!n) throw ParseError("Hamiltonian file has no terms");
  return PauliHamiltonian(*n, terms);
}

/// One- and two-body integrals over spin orbitals, physicist ordering:
///
///   H = E_nuc + sum h_pq a_p^ a_q + 1/2 sum g_pqrs a_p^ a_q^ a_r a_s
///
/// Spin orbitals are interleaved (alpha, beta, alpha, beta, ...).
struct IntegralSet {
  int n_spin_orbitals = 0;
  Eigen::MatrixXd one_body;
  std::vector<double> two_body;  // row-major n^4
  double nuclear_repulsion = 0.0;

  static IntegralSet zeros(int n) {
    if (n < 1 || n > kMaxQubits) {
      throw InvalidArgument("spin-orbital count out of range");
    }
    IntegralSet s;
    s.n_spin_orbitals = n;
    s.one_body = Eigen::MatrixXd::Zero(n, n);
    s.two_body.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    return s;
  }

  std::size_t index(int p, int q, int r, int s) const {
    const auto n = static_cast<std::size_t>(n_spin_orbitals);
    return ((static_cast<std::size_t>(p) * n + static_cast<std::size_t>(q)) * n +
            static_cast<std::size_t>(r)) * n + static_cast<std::size_t>(s);
  }
  double g(int p, int q, int r, int s) const { return two_body[index(p, q, r, s)]; }
  double& g(int p, int q, int r, int s) { return two_body[index(p, q, r, s)]; }

  /// h symmetric; g invariant under p<->s, q<->r and (ps)<->(qr), i.e. the
  /// 8-fold symmetry of real-orbital (ps|qr).
  void validate(double tol = 1e-10) const {
    const int n = n_spin_orbitals;
    if (one_body.rows() != n || one_body.cols() != n ||
        two_body.size() != static_cast<std::size_t>(n) * n * n * n) {
      throw InvalidArgument("integral arrays do not match spin-orbital count");
    }
    if ((one_body - one_body.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw InvalidArgument("one-body integrals are not symmetric");
    }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            const double v = g(p, q, r, s);
            if (std::abs(v - g(s, q, r, p)) > tol ||
                std::abs(v - g(p, r, q, s)) > tol ||
                std::abs(v - g(q, p, s, r)) > tol) {
              throw InvalidArgument(fmt::format(
                  "two-body integrals break symmetry at ({},{},{},{})", p, q, r, s));
            }
          }
  }
};

/// Parses the integral format:
///
///   norb <n spin orbitals>
///   convention physicist
///   nuc <E>
///   h <p> <q> <value>
///   g <p> <q> <r> <s> <value>
///
/// Unlisted entries are zero; symmetric partners must be listed explicitly.
inline IntegralSet parse_integrals(std::string_view text) {
  std::optional<IntegralSet> set;
  bool convention = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto index = [&](std::string_view tok) {
    const auto v = detail::parse_int(tok);
    if (!v || *v < 0 || *v >= set->n_spin_orbitals) {
      throw ParseError("orbital index '" + std::string(tok) + "' out of range", line_no);
    }
    return static_cast<int>(*v);
  };
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto toks =
        detail::split_ws(detail::strip_comment(text.substr(pos, eol - pos)));
    pos = eol + 1;
    ++line_no;
    if (toks.empty()) continue;
    const auto key = toks[0];
    if (detail::iequals(key, "norb")) {
      if (set || toks.size() != 2) throw ParseError("expected a single 'norb <n>'", line_no);
      const auto n = detail::parse_int(toks[1]);
      if (!n || *n < 1 || *n > kMaxQubits) throw ParseError("bad orbital count", line_no);
      set = IntegralSet::zeros(static_cast<int>(*n));
    } else if (detail::iequals(key, "convention")) {
      if (toks.size() != 2 || !detail::iequals(toks[1], "physicist")) {
        throw ParseError("only 'convention physicist' is supported", line_no);
      }
      convention = true;
    } else if (!set) {
      throw ParseError("'norb <n>' must come first", line_no);
    } else if (detail::iequals(key, "nuc")) {
      if (toks.size() != 2) throw ParseError("expected 'nuc <E>'", line_no);
      set->nuclear_repulsion = detail::parse_real(toks[1], line_no);
    } else if (detail::iequals(key, "h")) {
      if (toks.size() != 4) throw ParseError("expected 'h <p> <q> <value>'", line_no);
      set->one_body(index(toks[1]), index(toks[2])) = detail::parse_real(toks[3], line_no);
    } else if (detail::iequals(key, "g")) {
      if (toks.size() != 6) {
        throw ParseError("expected 'g <p> <q> <r> <s> <value>'", line_no);
      }
      set->g(index(toks[1]), index(toks[2]), index(toks[3]), index(toks[4])) =
          detail::parse_real(toks[5], line_no);
    } else {
      throw ParseError("unknown directive '" + std::string(key) + "'", line_no);
    }
  }
  if (!set) throw ParseError("missing 'norb <n>' header");
  if (!convention) {
    throw ParseError("integral file does not declare 'convention physicist'");
  }
  try {
    set->validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return *std::move(set);
}

namespace detail {

// Operator sums in X^x Z^z form (no i factors); Y = i X Z.
using XZKey = std::pair<std::uint32_t, std::uint32_t>;
using XZSum = std::map<XZKey, Complex>;

inline XZSum xz_multiply(const XZSum& a, const XZSum& b) {
  XZSum out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      // (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
      const double sign = (std::popcount(ka.second & kb.first) & 1) ? -1.0 : 1.0;
      out[{ka.first ^ kb.first, ka.second ^ kb.second}] += sign * ca * cb;
    }
  }
  return out;
}

// Jordan-Wigner image of a_p^ (create) or a_p.
inline XZSum jw_ladder(int p, bool create) {
  const std::uint32_t bit = 1U << p;
  const std::uint32_t below = bit - 1U;
  XZSum s;
  s[{bit, below}] = 0.5;
  s[{bit, below | bit}] = create ? 0.5 : -0.5;
  return s;
}

}  // namespace detail

/// Maps the second-quantized Hamiltonian to qubits with the Jordan-Wigner
/// transform (spin orbital p -> qubit p). Like terms are merged and tiny
/// coefficients dropped.
inline PauliHamiltonian jordan_wigner(const IntegralSet& ints) {
  ints.validate();
  const int n = ints.n_spin_orbitals;
  std::vector<detail::XZSum> create, annihilate;
  for (int p = 0; p < n; ++p) {
    create.push_back(detail::jw_ladder(p, true));
    annihilate.push_back(detail::jw_ladder(p, false));
  }

  detail::XZSum total;
  total[{0U, 0U}] += ints.nuclear_repulsion;
  auto accumulate = [&](const detail::XZSum& s, double w) {
    for (const auto& [k, c] : s) total[k] += w * c;
  };
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double h = ints.one_body(p, q);
      if (h != 0.0) accumulate(detail::xz_multiply(create[p], annihilate[q]), h);
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;  // a_p^ a_p^ = 0
      const auto pq = detail::xz_multiply(create[p], create[q]);
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
          if (r == s) continue;
          const double v = ints.g(p, q, r, s);
          if (v == 0.0) continue;
          const auto rs = detail::xz_multiply(annihilate[r], annihilate[s]);
          accumulate(detail::xz_multiply(pq, rs), 0.5 * v);
        }
      }
    }
  }

  std::vector<PauliTerm> terms;
  for (const auto& [key, c] : total) {
    const auto [x, z] = key;
    // X^x Z^z = (-i)^{#Y} * (Pauli label)
    static const Complex minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const Complex coeff = c * minus_i_pow[std::popcount(x & z) & 3];
    if (std::abs(coeff) < 1e-12) continue;
    if (std::abs(coeff.imag()) > 1e-10) {
      throw NumericalError("Jordan-Wigner produced a non-Hermitian term");
    }
    std::string label(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
      const bool xb = (x >> q) & 1U;
      const bool zb = (z >> q) & 1U;
      label[static_cast<std::size_t>(n - 1 - q)] =
          xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    terms.emplace_back(coeff.real(), std::move(label));
  }
  return PauliHamiltonian(n, terms);
}

struct GroundState {
  double energy;
  StateVector state;
};

/// Lowest eigenpair of the dense Hamiltonian matrix (n_qubits <= 10).
inline GroundState exact_ground_state(const PauliHamiltonian& h) {
  if (h.n_qubits() > 10) {
    throw InvalidArgument("exact diagonalization limited to 10 qubits");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge");
  }
  CVector v = es.eigenvectors().col(0);
  v.normalize();
  return {es.eigenvalues()(0), StateVector::from_amplitudes(std::move(v), 1e-8)};
}

inline double exact_ground_energy(const PauliHamiltonian& h) {
  return exact_ground_state(h).energy;
}

/// <P> for one term on a pure state (imaginary round-off dropped).
inline double pauli_expectation(const PauliTerm& t, const StateVector& psi) {
  const auto& a = psi.amplitudes();
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto col = static_cast<std::uint32_t>(i);
    acc += std::conj(a(col ^ t.x_mask())) * t.phase(col) * a(i);
  }
  return acc.real();
}

/// Tr(P rho) for one term.
inline double pauli_expectation(const PauliTerm& t, const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto b = static_cast<std::uint32_t>(i);
    acc += t.phase(b) * m(i, b ^ t.x_mask());
  }
  return acc.real();
}

namespace detail {

inline void check_width(const PauliHamiltonian& h, int n) {
  if (h.n_qubits() != n) {
    throw InvalidArgument("Hamiltonian acts on " + std::to_string(h.n_qubits()) +
                          " qubits, state has " + std::to_string(n));
  }
}

}  // namespace detail

/// sum_a h_a <P_a>, term by term without forming the full matrix.
inline double expectation_exact(const PauliHamiltonian& h, const StateVector& psi) {
  detail::check_width(h, psi.n_qubits());
  double e = 0.0;
  for (const auto& t : h.terms()) e += t.coefficient() * pauli_expectation(t, psi);
  return e;
}

inline double expectation_exact(const PauliHamiltonian& h, const DensityMatrix& rho) {
  detail::check_width(h, rho.n_qubits());
  double e = 0.0;
  for (const auto& t : h.terms()) e += t.coefficient() * pauli_expectation(t, rho);
  return e;
}

struct EnergyEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  long long shots_used = 0;
};

namespace detail {

// Rotation taking the measured Pauli basis to Z: H for X, H S^dagger for Y.
inline CMatrix basis_change(char op) {
  using namespace std::complex_literals;
  const CMatrix h = gate_matrix(GateKind::H);
  if (op == 'X') return h;
  CMatrix sdg = CMatrix::Zero(2, 2);
  sdg(0, 0) = 1.0;
  sdg(1, 1) = -1i;
  return h * sdg;
}

template <typename State>
Eigen::VectorXd rotated_probabilities(const State& state, const PauliTerm& t) {
  State rotated = state;
  for (int q = 0; q < t.n_qubits(); ++q) {
    const char op = t.op_on(q);
    if (op != 'X' && op != 'Y') continue;
    const int target[1] = {q};
    if constexpr (std::is_same_v<State, StateVector>) {
      rotated = apply_gate(rotated, basis_change(op), target);
    } else {
      rotated = apply_unitary(rotated, basis_change(op), target);
    }
  }
  Eigen::VectorXd p = rotated.probabilities().cwiseMax(0.0);
  return p / p.sum();
}

template <typename State>
EnergyEstimate sample_energy(const PauliHamiltonian& h, const State& state,
                             long long shots, const NoiseModel* noise,
                             std::uint64_t seed) {
  if (shots <= 0) throw InvalidArgument("shots must be positive");
  check_width(h, state.n_qubits());
  std::vector<Eigen::Matrix2d> confusion;
  if (noise) confusion = noise->readout_for(state.n_qubits());

  // distributions shared by terms measured in the same basis
  std::map<std::pair<std::uint32_t, std::uint32_t>, Eigen::VectorXd> cache;
  EnergyEstimate est;
  double variance = 0.0;
  for (std::size_t k = 0; k < h.terms().size(); ++k) {
    const auto& t = h.terms()[k];
    if (t.is_identity()) {
      est.value += t.coefficient();
      continue;
    }
    const std::pair<std::uint32_t, std::uint32_t> basis{t.x_mask() & ~t.z_mask(),
                                                        t.x_mask() & t.z_mask()};
    auto it = cache.find(basis);
    if (it == cache.end()) {
      Eigen::VectorXd p = rotated_probabilities(state, t);
      if (noise) p = readout_apply(confusion, p);
      it = cache.emplace(basis, std::move(p)).first;
    }
    const auto& p = it->second;
    double q_even = 0.0;
    for (Eigen::Index b = 0; b < p.size(); ++b) {
      if ((std::popcount(static_cast<std::uint32_t>(b) & t.support()) & 1) == 0) {
        q_even += p(b);
      }
    }
    q_even = std::clamp(q_even, 0.0, 1.0);
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(k)});
    std::binomial_distribution<long long> draw(shots, q_even);
    const long long even = draw(rng);
    const double mean = static_cast<double>(2 * even - shots) / static_cast<double>(shots);
    est.value += t.coefficient() * mean;
    variance += t.coefficient() * t.coefficient() * (1.0 - mean * mean) /
                static_cast<double>(shots);
    est.shots_used += shots;
  }
  est.standard_error = std::sqrt(std::max(variance, 0.0));
  return est;
}

}  // namespace detail

/// Shot-sampled energy: each non-identity term is measured in its own
/// rotated basis with `shots` repetitions (through readout confusion when a
/// noise model is given), then combined with the term weights. Deterministic
/// for a fixed seed.
inline EnergyEstimate expectation_sampled(const PauliHamiltonian& h,
                                          const ParameterizedCircuit& circuit,
                                          std::span<const double> theta,
                                          long long shots,
                                          const NoiseModel* noise,
                                          std::uint64_t seed) {
  if (shots <= 0) throw InvalidArgument("shots must be positive");
  detail::check_width(h, circuit.n_qubits());
  if (noise) {
    return detail::sample_energy(h, simulate_noisy(circuit, theta, *noise),
                                 shots, noise, seed);
  }
  return detail::sample_energy(h, simulate_ideal(circuit, theta), shots,
                               nullptr, seed);
}

/// Sampling from an already prepared state.
inline EnergyEstimate expectation_sampled(const PauliHamiltonian& h,
                                          const StateVector& psi, long long shots,
                                          std::uint64_t seed) {
  return detail::sample_energy(h, psi, shots, nullptr, seed);
}

inline EnergyEstimate expectation_sampled(const PauliHamiltonian& h,
                                          const DensityMatrix& rho, long long shots,
                                          const NoiseModel* noise,
                                          std::uint64_t seed) {
  return detail::sample_energy(h, rho, shots, noise, seed);
}

}  // namespace heabench
