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
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "heabench/error.hpp"
#include "heabench/state.hpp"

namespace heabench {

enum class GateKind { H, X, RX, RY, RZ, CX, CZ };

inline constexpr std::array<GateKind, 7> kAllGateKinds = {
    GateKind::H,  GateKind::X,  GateKind::RX, GateKind::RY,
    GateKind::RZ, GateKind::CX, GateKind::CZ};

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
  }
  return "?";
}

/// Case-insensitive lookup; nullopt for unknown names.
inline std::optional<GateKind> parse_gate_kind(std::string_view name) {
  std::string lower(name);
  for (auto& ch : lower) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  for (auto k : kAllGateKinds) {
    if (gate_name(k) == lower) return k;
  }
  return std::nullopt;
}

inline int gate_arity(GateKind k) {
  return (k == GateKind::CX || k == GateKind::CZ) ? 2 : 1;
}

inline bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

/// Unitary of `kind` in the local basis where bit j belongs to target j.
/// For CX, target 0 is the control.
inline CMatrix gate_matrix(GateKind kind, double angle = 0.0) {
  using namespace std::complex_literals;
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  CMatrix m;
  switch (kind) {
    case GateKind::H:
      m = CMatrix::Constant(2, 2, (1.0 / std::numbers::sqrt2));
      m(1, 1) = -(1.0 / std::numbers::sqrt2);
      break;
    case GateKind::X:
      m = CMatrix::Zero(2, 2);
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case GateKind::RX:
      m.resize(2, 2);
      m << c, -1i * s, -1i * s, c;
      break;
    case GateKind::RY:
      m.resize(2, 2);
      m << c, -s, s, c;
      break;
    case GateKind::RZ:
      m = CMatrix::Zero(2, 2);
      m(0, 0) = std::exp(-0.5i * angle);
      m(1, 1) = std::exp(0.5i * angle);
      break;
    case GateKind::CX:
      m = CMatrix::Zero(4, 4);
      m(0, 0) = m(2, 2) = 1.0;
      m(1, 3) = m(3, 1) = 1.0;
      break;
    case GateKind::CZ:
      m = CMatrix::Identity(4, 4);
      m(3, 3) = -1.0;
      break;
  }
  return m;
}

struct GateSpec {
  GateKind kind;
  std::vector<int> targets;
  std::optional<int> parameter_slot;

  bool operator==(const GateSpec&) const = default;
};

struct BoundGate {
  GateKind kind;
  std::vector<int> targets;
  double angle = 0.0;

  CMatrix matrix() const { return gate_matrix(kind, angle); }
};

using ParameterVector = std::vector<double>;

/// Ordered gate list over symbolic parameter slots. Immutable once built.
class ParameterizedCircuit {
 public:
  ParameterizedCircuit(int n_qubits, std::vector<GateSpec> gates,
                       std::string label = {})
      : n_qubits_(n_qubits), gates_(std::move(gates)), label_(std::move(label)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) {
      throw InvalidArgument("circuit qubit count out of range");
    }
    int max_slot = -1;
    for (const auto& g : gates_) {
      if (static_cast<int>(g.targets.size()) != gate_arity(g.kind)) {
        throw InvalidArgument(std::string("gate ") +
                              std::string(gate_name(g.kind)) +
                              " has wrong number of targets");
      }
      detail::check_targets(g.targets, n_qubits_,
                            std::size_t{1} << g.targets.size());
      if (is_rotation(g.kind) != g.parameter_slot.has_value()) {
        throw InvalidArgument(
            "parameter slot must be present exactly for rotation gates");
      }
      if (g.parameter_slot) {
        if (*g.parameter_slot < 0) {
          throw InvalidArgument("negative parameter slot");
        }
        max_slot = std::max(max_slot, *g.parameter_slot);
      }
    }
    n_parameters_ = max_slot + 1;
    std::vector<bool> used(static_cast<std::size_t>(n_parameters_), false);
    for (const auto& g : gates_) {
      if (g.parameter_slot) used[static_cast<std::size_t>(*g.parameter_slot)] = true;
    }
    for (int k = 0; k < n_parameters_; ++k) {
      if (!used[static_cast<std::size_t>(k)]) {
        throw InvalidArgument("parameter slot p" + std::to_string(k) +
                              " is never used");
      }
    }
  }

  int n_qubits() const noexcept { return n_qubits_; }
  int n_parameters() const noexcept { return n_parameters_; }
  const std::vector<GateSpec>& gates() const noexcept { return gates_; }
  const std::string& label() const noexcept { return label_; }

  /// Kind of every parameter slot's first use.
  std::vector<GateKind> parameter_kinds() const {
    std::vector<GateKind> kinds(static_cast<std::size_t>(n_parameters_),
                                GateKind::RX);
    std::vector<bool> seen(kinds.size(), false);
    for (const auto& g : gates_) {
      if (!g.parameter_slot) continue;
      const auto k = static_cast<std::size_t>(*g.parameter_slot);
      if (!seen[k]) {
        kinds[k] = g.kind;
        seen[k] = true;
      }
    }
    return kinds;
  }

  /// Two-qubit gate kinds in program order, e.g. "CX,CZ,CX,CZ"; a single
  /// kind when all agree ("CX").
  std::string entangler_signature() const {
    std::vector<std::string> kinds;
    for (const auto& g : gates_) {
      if (gate_arity(g.kind) == 2) {
        std::string name(gate_name(g.kind));
        for (auto& ch : name) ch = static_cast<char>(std::toupper(ch));
        kinds.push_back(std::move(name));
      }
    }
    if (kinds.empty()) return "";
    bool uniform = true;
    for (const auto& k : kinds) uniform = uniform && k == kinds.front();
    if (uniform) return kinds.front();
    std::string out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (i) out += ',';
      out += kinds[i];
    }
    return out;
  }

  /// Canonical text form accepted by load_circuit.
  std::string to_text() const {
    std::ostringstream os;
    os << "qubits " << n_qubits_ << '\n';
    for (const auto& g : gates_) {
      os << gate_name(g.kind);
      for (int t : g.targets) os << " q" << t;
      if (g.parameter_slot) os << " p" << *g.parameter_slot;
      os << '\n';
    }
    return os.str();
  }

  ParameterizedCircuit with_label(std::string label) const {
    ParameterizedCircuit c = *this;
    c.label_ = std::move(label);
    return c;
  }

 private:
  int n_qubits_;
  std::vector<GateSpec> gates_;
  std::string label_;
  int n_parameters_ = 0;
};

inline std::vector<BoundGate> bind_parameters(const ParameterizedCircuit& circuit,
                                              std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != circuit.n_parameters()) {
    throw InvalidArgument("circuit expects " +
                          std::to_string(circuit.n_parameters()) +
                          " parameters, got " + std::to_string(theta.size()));
  }
  std::vector<BoundGate> out;
  out.reserve(circuit.gates().size());
  for (const auto& g : circuit.gates()) {
    double angle = 0.0;
    if (g.parameter_slot) {
      angle = theta[static_cast<std::size_t>(*g.parameter_slot)];
      if (!std::isfinite(angle)) {
        throw InvalidArgument("non-finite parameter value");
      }
    }
    out.push_back(BoundGate{g.kind, g.targets, angle});
  }
  return out;
}

/// |0...0> evolved through the bound circuit.
inline StateVector simulate_ideal(const ParameterizedCircuit& circuit,
                                  std::span<const double> theta) {
  StateVector psi = StateVector::zero(circuit.n_qubits());
  for (const auto& g : bind_parameters(circuit, theta)) {
    psi = apply_gate(psi, g.matrix(), g.targets);
  }
  return psi;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::optional<long> parse_int(std::string_view s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

// "q3" -> 3, "p12" -> 12 for the given prefix letter (case-insensitive).
inline std::optional<long> parse_prefixed(std::string_view tok, char prefix) {
  if (tok.size() < 2) return std::nullopt;
  if (std::tolower(static_cast<unsigned char>(tok[0])) != prefix) return std::nullopt;
  return parse_int(tok.substr(1));
}

}  // namespace detail

/// Parses the circuit-description format:
///
///   qubits <n>
///   <kind> q<i> [q<j>] [p<k>]     # kind in {h,x,rx,ry,rz,cx,cz}
///
/// Errors carry the offending line number.
inline ParameterizedCircuit load_circuit(std::string_view text,
                                         std::string label = {}) {
  std::optional<int> n_qubits;
  std::vector<GateSpec> gates;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;

    if (!n_qubits) {
      if (toks.size() != 2 || !detail::iequals(toks[0], "qubits")) {
        throw ParseError("expected 'qubits <n>' header", line_no);
      }
      const auto n = detail::parse_int(toks[1]);
      if (!n || *n < 1 || *n > kMaxQubits) {
        throw ParseError("invalid qubit count '" + std::string(toks[1]) + "'",
                         line_no);
      }
      n_qubits = static_cast<int>(*n);
      continue;
    }

    const auto kind = parse_gate_kind(toks[0]);
    if (!kind) {
      throw ParseError("unknown gate kind '" + std::string(toks[0]) + "'",
                       line_no);
    }
    GateSpec g{*kind, {}, std::nullopt};
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (auto q = detail::parse_prefixed(toks[i], 'q')) {
        if (g.parameter_slot) {
          throw ParseError("qubit listed after parameter", line_no);
        }
        if (*q < 0 || *q >= *n_qubits) {
          throw ParseError("qubit " + std::string(toks[i]) + " out of range",
                           line_no);
        }
        g.targets.push_back(static_cast<int>(*q));
      } else if (auto p = detail::parse_prefixed(toks[i], 'p')) {
        if (g.parameter_slot || *p < 0) {
          throw ParseError("bad parameter token '" + std::string(toks[i]) + "'",
                           line_no);
        }
        g.parameter_slot = static_cast<int>(*p);
      } else {
        throw ParseError("malformed token '" + std::string(toks[i]) + "'",
                         line_no);
      }
    }
    if (static_cast<int>(g.targets.size()) != gate_arity(*kind)) {
      throw ParseError(std::string(gate_name(*kind)) + " takes " +
                           std::to_string(gate_arity(*kind)) + " qubit(s)",
                       line_no);
    }
    if (g.targets.size() == 2 && g.targets[0] == g.targets[1]) {
      throw ParseError("repeated target qubit", line_no);
    }
    if (is_rotation(*kind) != g.parameter_slot.has_value()) {
      throw ParseError(is_rotation(*kind) ? "rotation needs a parameter p<k>"
                                          : "gate takes no parameter",
                       line_no);
    }
    gates.push_back(std::move(g));
  }
  if (!n_qubits) throw ParseError("missing 'qubits <n>' header", 1);
  try {
    return ParameterizedCircuit(*n_qubits, std::move(gates), std::move(label));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace heabench
