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
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heabench/circuit.hpp"
#include "heabench/error.hpp"
#include "heabench/state.hpp"

namespace heabench {

namespace detail {

// Pauli matrices indexed I, X, Y, Z.
inline CMatrix pauli_matrix(int which) {
  using namespace std::complex_literals;
  CMatrix m = CMatrix::Zero(2, 2);
  switch (which) {
    case 0: m(0, 0) = m(1, 1) = 1.0; break;
    case 1: m(0, 1) = m(1, 0) = 1.0; break;
    case 2: m(0, 1) = -1i; m(1, 0) = 1i; break;
    default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

inline CMatrix kron(const CMatrix& high, const CMatrix& low) {
  CMatrix out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index i = 0; i < high.rows(); ++i) {
    for (Eigen::Index j = 0; j < high.cols(); ++j) {
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) =
          high(i, j) * low;
    }
  }
  return out;
}

}  // namespace detail

/// rho -> (1 - p) rho + p I / 2^n as Kraus operators over the n-qubit Pauli
/// basis: weight 1 - p + p/4^n on the identity, p/4^n on each other string.
inline KrausSet depolarizing_channel(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("depolarizing probability " + std::to_string(p) +
                          " outside [0, 1]");
  }
  if (n != 1 && n != 2) {
    throw InvalidArgument("depolarizing channel supports 1 or 2 qubits");
  }
  const int count = n == 1 ? 4 : 16;
  const double w = p / count;
  std::vector<CMatrix> ops;
  for (int idx = 0; idx < count; ++idx) {
    const double weight = idx == 0 ? 1.0 - p + w : w;
    if (weight <= 0.0) continue;
    const CMatrix pauli =
        n == 1 ? detail::pauli_matrix(idx)
               : detail::kron(detail::pauli_matrix(idx / 4),
                              detail::pauli_matrix(idx % 4));
    ops.push_back(std::sqrt(weight) * pauli);
  }
  return KrausSet(std::move(ops));
}

/// Amplitude damping toward |0> with probability 1 - exp(-t/T1) plus the
/// extra dephasing that brings coherences to exp(-t/T2). T1, T2 in
/// microseconds, t in nanoseconds; infinite times are accepted.
inline KrausSet thermal_relaxation_channel(double t1_us, double t2_us,
                                           double t_ns) {
  if (!(t1_us > 0.0) || !(t2_us > 0.0)) {
    throw InvalidArgument("T1 and T2 must be positive");
  }
  if (t2_us > 2.0 * t1_us) {
    throw InvalidArgument("T2 = " + std::to_string(t2_us) +
                          " us exceeds 2*T1 = " + std::to_string(2.0 * t1_us) +
                          " us");
  }
  if (!(t_ns >= 0.0) || !std::isfinite(t_ns)) {
    throw InvalidArgument("gate duration must be finite and >= 0");
  }
  const double t_us = t_ns * 1e-3;
  const double keep = std::exp(-t_us / t1_us);  // 1 - gamma
  const double gamma = 1.0 - keep;
  const double coherence = std::exp(-t_us / t2_us);
  // residual dephasing after amplitude damping's sqrt(1 - gamma)
  const double f =
      keep > 0.0 ? std::clamp(coherence / std::sqrt(keep), 0.0, 1.0) : 1.0;

  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(keep);
  CMatrix k1 = CMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  const CMatrix z = detail::pauli_matrix(3);
  const double a = std::sqrt((1.0 + f) / 2.0);
  const double b = std::sqrt((1.0 - f) / 2.0);

  std::vector<CMatrix> ops;
  for (const CMatrix* k : {&k0, &k1}) {
    if (k->cwiseAbs().maxCoeff() == 0.0) continue;
    ops.push_back(a * *k);
    if (b > 0.0) ops.push_back(b * (z * *k));
  }
  return KrausSet(std::move(ops));
}

/// Calibration data for one qubit.
struct QubitCalibration {
  double t1_us = std::numeric_limits<double>::infinity();
  double t2_us = std::numeric_limits<double>::infinity();
  double ro01 = 0.0;  // p(read 1 | prepared 0)
  double ro10 = 0.0;  // p(read 0 | prepared 1)
};

struct GateCalibration {
  GateKind kind;
  std::vector<int> qubits;
  double error = 0.0;
  double duration_ns = 0.0;
};

struct DeviceCalibration {
  std::string name;
  std::map<int, QubitCalibration> qubits;
  std::vector<GateCalibration> gates;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    for (const auto& [q, c] : qubits) {
      const auto where = "qubit " + std::to_string(q) + ": ";
      if (!(c.t1_us > 0.0)) throw InvalidArgument(where + "T1 must be > 0");
      if (!(c.t2_us > 0.0)) throw InvalidArgument(where + "T2 must be > 0");
      if (c.t2_us > 2.0 * c.t1_us) {
        throw InvalidArgument(where + "T2 exceeds 2*T1");
      }
      if (!prob(c.ro01) || !prob(c.ro10)) {
        throw InvalidArgument(where + "readout probability outside [0, 1]");
      }
    }
    for (const auto& g : gates) {
      const auto where = "gate " + std::string(gate_name(g.kind)) + ": ";
      if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind)) {
        throw InvalidArgument(where + "wrong number of qubits");
      }
      for (int q : g.qubits) {
        if (!qubits.contains(q)) {
          throw InvalidArgument(where + "qubit " + std::to_string(q) +
                                " has no calibration line");
        }
      }
      if (!prob(g.error)) throw InvalidArgument(where + "error outside [0, 1]");
      if (!(g.duration_ns >= 0.0) || !std::isfinite(g.duration_ns)) {
        throw InvalidArgument(where + "duration must be finite and >= 0");
      }
    }
  }

  /// Copy with every gate error multiplied by `factor` (capped at 1).
  DeviceCalibration with_scaled_gate_errors(double factor) const {
    DeviceCalibration out = *this;
    for (auto& g : out.gates) g.error = std::min(1.0, g.error * factor);
    return out;
  }
};

namespace detail {

inline double parse_real(std::string_view tok, std::size_t line) {
  const std::string s(tok);
  if (s == "inf" || s == "Inf" || s == "INF") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
  if (used != s.size()) throw ParseError("trailing characters in '" + s + "'", line);
  return v;
}

}  // namespace detail

/// Parses the calibration format:
///
///   device <name>
///   qubit <i> t1 <us> t2 <us> ro01 <p> ro10 <p>
///   gate <kind> <q...> error <p> duration <ns>
///
/// and validates the physical constraints (T2 <= 2 T1 is a hard error).
inline DeviceCalibration parse_calibration(std::string_view text) {
  DeviceCalibration cal;
  bool have_device = false;
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

    if (detail::iequals(toks[0], "device")) {
      if (toks.size() != 2) throw ParseError("expected 'device <name>'", line_no);
      cal.name = std::string(toks[1]);
      have_device = true;
    } else if (detail::iequals(toks[0], "qubit")) {
      if (toks.size() != 10) {
        throw ParseError("expected 'qubit <i> t1 <us> t2 <us> ro01 <p> ro10 <p>'",
                         line_no);
      }
      const auto q = detail::parse_int(toks[1]);
      if (!q || *q < 0 || *q >= kMaxQubits) {
        throw ParseError("bad qubit index '" + std::string(toks[1]) + "'", line_no);
      }
      QubitCalibration qc;
      bool seen[4] = {false, false, false, false};
      for (std::size_t i = 2; i + 1 < toks.size(); i += 2) {
        const double v = detail::parse_real(toks[i + 1], line_no);
        if (detail::iequals(toks[i], "t1")) { qc.t1_us = v; seen[0] = true; }
        else if (detail::iequals(toks[i], "t2")) { qc.t2_us = v; seen[1] = true; }
        else if (detail::iequals(toks[i], "ro01")) { qc.ro01 = v; seen[2] = true; }
        else if (detail::iequals(toks[i], "ro10")) { qc.ro10 = v; seen[3] = true; }
        else throw ParseError("unknown qubit field '" + std::string(toks[i]) + "'", line_no);
      }
      if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
        throw ParseError("qubit line needs t1, t2, ro01 and ro10", line_no);
      }
      if (cal.qubits.contains(static_cast<int>(*q))) {
        throw ParseError("duplicate qubit " + std::to_string(*q), line_no);
      }
      cal.qubits[static_cast<int>(*q)] = qc;
    } else if (detail::iequals(toks[0], "gate")) {
      if (toks.size() < 7) {
        throw ParseError("expected 'gate <kind> <q...> error <p> duration <ns>'",
                         line_no);
      }
      const auto kind = parse_gate_kind(toks[1]);
      if (!kind) {
        throw ParseError("unknown gate kind '" + std::string(toks[1]) + "'", line_no);
      }
      GateCalibration g{*kind, {}, 0.0, 0.0};
      std::size_t i = 2;
      for (; i < toks.size(); ++i) {
        const auto q = detail::parse_int(toks[i]);
        if (!q) break;
        if (*q < 0 || *q >= kMaxQubits) throw ParseError("qubit out of range", line_no);
        g.qubits.push_back(static_cast<int>(*q));
      }
      if (static_cast<int>(g.qubits.size()) != gate_arity(*kind)) {
        throw ParseError(std::string(gate_name(*kind)) + " takes " +
                             std::to_string(gate_arity(*kind)) + " qubit(s)",
                         line_no);
      }
      bool seen_err = false, seen_dur = false;
      for (; i + 1 < toks.size(); i += 2) {
        const double v = detail::parse_real(toks[i + 1], line_no);
        if (detail::iequals(toks[i], "error")) { g.error = v; seen_err = true; }
        else if (detail::iequals(toks[i], "duration")) { g.duration_ns = v; seen_dur = true; }
        else throw ParseError("unknown gate field '" + std::string(toks[i]) + "'", line_no);
      }
      if (i != toks.size() || !seen_err || !seen_dur) {
        throw ParseError("gate line needs 'error <p> duration <ns>'", line_no);
      }
      cal.gates.push_back(std::move(g));
    } else {
      throw ParseError("unknown directive '" + std::string(toks[0]) + "'", line_no);
    }
  }
  if (!have_device) throw ParseError("missing 'device <name>' line", 1);
  try {
    cal.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid calibration: ") + e.what());
  }
  return cal;
}

/// One Kraus channel acting on some of a gate's qubits (absolute indices).
struct ChannelStep {
  KrausSet channel;
  std::vector<int> qubits;
};

/// Noise that follows the ideal unitary of one (gate kind, qubits) pair.
struct GateNoise {
  std::vector<ChannelStep> steps;
  double depolarizing_strength = 0.0;
  // All steps composed, as a transfer matrix on `qubits`; empty when noiseless.
  CMatrix transfer;
  std::vector<int> qubits;
};

namespace detail {

using NoiseKey = std::pair<GateKind, std::vector<int>>;

inline NoiseKey noise_key(GateKind kind, std::span<const int> qubits) {
  std::vector<int> q(qubits.begin(), qubits.end());
  if (kind == GateKind::CZ) std::sort(q.begin(), q.end());
  return {kind, std::move(q)};
}

}  // namespace detail

/// Per-gate noise channels plus per-qubit readout confusion. Immutable once
/// built; safe to share across threads.
class NoiseModel {
 public:
  NoiseModel() = default;

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  bool covers(GateKind kind, std::span<const int> qubits) const {
    return channels_.contains(detail::noise_key(kind, qubits));
  }

  const GateNoise& gate_noise(GateKind kind, std::span<const int> qubits) const {
    const auto it = channels_.find(detail::noise_key(kind, qubits));
    if (it == channels_.end()) {
      std::string q;
      for (int x : qubits) q += " " + std::to_string(x);
      throw MissingNoiseEntry("noise model '" + name_ + "' has no entry for " +
                              std::string(gate_name(kind)) + q);
    }
    return it->second;
  }

  /// All steps of one gate's noise composed into a single channel on the
  /// gate's qubits (local bit j <-> gate target j).
  KrausSet combined_channel(GateKind kind, std::span<const int> qubits) const {
    return compose_steps(gate_noise(kind, qubits).steps, qubits);
  }

  /// Row-stochastic confusion matrix [prepared][read] for qubit `q`;
  /// identity when the qubit has no readout data.
  Eigen::Matrix2d readout(int q) const {
    const auto it = readout_.find(q);
    return it == readout_.end() ? Eigen::Matrix2d::Identity() : it->second;
  }

  std::vector<Eigen::Matrix2d> readout_for(int n_qubits) const {
    std::vector<Eigen::Matrix2d> out;
    for (int q = 0; q < n_qubits; ++q) out.push_back(readout(q));
    return out;
  }

  std::vector<detail::NoiseKey> keys() const {
    std::vector<detail::NoiseKey> out;
    for (const auto& [k, v] : channels_) out.push_back(k);
    return out;
  }

  /// Throws MissingNoiseEntry naming the first uncovered gate.
  void check_covers(const ParameterizedCircuit& circuit) const {
    for (const auto& g : circuit.gates()) gate_noise(g.kind, g.targets);
  }

 private:
  friend NoiseModel build_noise_model(const DeviceCalibration&);

  static KrausSet compose_steps(const std::vector<ChannelStep>& steps,
                                std::span<const int> qubits) {
    const int arity = static_cast<int>(qubits.size());
    KrausSet acc = KrausSet::identity(arity);
    for (const auto& step : steps) {
      KrausSet lifted = step.channel;
      if (arity == 2 && step.channel.arity() == 1) {
        lifted = step.qubits[0] == qubits[0]
                     ? KrausSet::tensor(step.channel, KrausSet::identity(1))
                     : KrausSet::tensor(KrausSet::identity(1), step.channel);
      }
      acc = KrausSet::compose(acc, lifted);
    }
    return acc;
  }

  std::string name_;
  std::map<detail::NoiseKey, GateNoise> channels_;
  std::map<int, Eigen::Matrix2d> readout_;
  std::vector<std::string> warnings_;
};

/// Builds gate channels as: ideal unitary, then depolarizing, then thermal
/// relaxation on each participating qubit for the gate duration. The
/// depolarizing strength is solved so the channel's average gate infidelity
/// equals the calibrated error; it is clamped to [0, 1] with a warning when
/// thermal relaxation alone already exceeds the target (or cannot be reached).
inline NoiseModel build_noise_model(const DeviceCalibration& cal) {
  cal.validate();
  NoiseModel model;
  model.name_ = cal.name;
  for (const auto& g : cal.gates) {
    const int arity = gate_arity(g.kind);
    const double d = static_cast<double>(1 << arity);

    std::vector<KrausSet> relax;
    double relax_fidelity = 1.0;
    for (int q : g.qubits) {
      const auto& qc = cal.qubits.at(q);
      relax.push_back(thermal_relaxation_channel(qc.t1_us, qc.t2_us, g.duration_ns));
      relax_fidelity *= relax.back().process_fidelity();
    }

    const double target_fidelity = 1.0 - g.error * (d + 1.0) / d;
    double p = 0.0;
    const double denom = relax_fidelity - 1.0 / (d * d);
    if (denom > 0.0) p = (relax_fidelity - target_fidelity) / denom;
    const std::string where = std::string(gate_name(g.kind)) + " on" +
                              [&] {
                                std::string s;
                                for (int q : g.qubits) s += " " + std::to_string(q);
                                return s;
                              }();
    if (p < 0.0) {
      if (p < -1e-12) {
        model.warnings_.push_back(
            where + ": thermal relaxation exceeds the calibrated error; "
                    "depolarizing strength set to 0");
      }
      p = 0.0;
    } else if (p > 1.0) {
      model.warnings_.push_back(where +
                                ": calibrated error unreachable; depolarizing "
                                "strength clamped to 1");
      p = 1.0;
    }

    GateNoise noise;
    noise.depolarizing_strength = p;
    // Two-qubit depolarizing noise is symmetric, so the calibration's qubit
    // order is fine for CZ entries looked up in either order.
    if (p > 0.0) noise.steps.push_back({depolarizing_channel(p, arity), g.qubits});
    for (int j = 0; j < arity; ++j) {
      if (relax[static_cast<std::size_t>(j)].operators().size() > 1) {
        noise.steps.push_back({relax[static_cast<std::size_t>(j)],
                               {g.qubits[static_cast<std::size_t>(j)]}});
      }
    }
    if (!noise.steps.empty()) {
      noise.transfer = NoiseModel::compose_steps(noise.steps, g.qubits).transfer_matrix();
      noise.qubits = g.qubits;
    }
    model.channels_[detail::noise_key(g.kind, g.qubits)] = std::move(noise);
  }
  for (const auto& [q, qc] : cal.qubits) {
    Eigen::Matrix2d c;
    c << 1.0 - qc.ro01, qc.ro01, qc.ro10, 1.0 - qc.ro10;
    model.readout_[q] = c;
  }
  return model;
}

/// Pushes an outcome distribution over bitstrings through the per-qubit
/// confusion matrices ([prepared][read], qubit q = bit q of the index).
inline Eigen::VectorXd readout_apply(std::span<const Eigen::Matrix2d> confusion,
                                     const Eigen::VectorXd& distribution) {
  const auto n = static_cast<int>(confusion.size());
  if (distribution.size() != (Eigen::Index{1} << n)) {
    throw InvalidArgument("distribution size does not match qubit count");
  }
  if (std::abs(distribution.sum() - 1.0) > 1e-9 || distribution.minCoeff() < -1e-12) {
    throw InvalidArgument("outcome distribution must be non-negative and sum to 1");
  }
  for (const auto& c : confusion) {
    if (c.minCoeff() < 0.0 || c.maxCoeff() > 1.0 ||
        std::abs(c(0, 0) + c(0, 1) - 1.0) > 1e-12 ||
        std::abs(c(1, 0) + c(1, 1) - 1.0) > 1e-12) {
      throw InvalidArgument("confusion matrix is not row-stochastic");
    }
  }
  Eigen::VectorXd out = distribution;
  for (int q = 0; q < n; ++q) {
    const auto& c = confusion[static_cast<std::size_t>(q)];
    if (c.isIdentity()) continue;
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (i & bit) continue;
      const double p0 = out(i);
      const double p1 = out(i | bit);
      out(i) = p0 * c(0, 0) + p1 * c(1, 0);
      out(i | bit) = p0 * c(0, 1) + p1 * c(1, 1);
    }
  }
  return out;
}

/// |0..0><0..0| through every bound gate, each followed by its noise.
inline DensityMatrix simulate_noisy(const ParameterizedCircuit& circuit,
                                    std::span<const double> theta,
                                    const NoiseModel& noise) {
  DensityMatrix rho = DensityMatrix::zero(circuit.n_qubits());
  for (const auto& g : bind_parameters(circuit, theta)) {
    const auto& gn = noise.gate_noise(g.kind, g.targets);
    rho = apply_unitary(rho, g.matrix(), g.targets);
    if (gn.transfer.size() > 0) rho = apply_transfer(rho, gn.transfer, gn.qubits);
  }
  return rho;
}

}  // namespace heabench
