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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "heabench/circuit.hpp"
#include "heabench/error.hpp"
#include "heabench/noise.hpp"
#include "heabench/parallel.hpp"
#include "heabench/rng.hpp"
#include "heabench/state.hpp"

namespace heabench {

/// Fidelity density of Haar-random pure states in dimension N:
/// (N - 1)(1 - F)^(N - 2).
inline double haar_pdf(double fidelity, long long dimension) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw InvalidArgument("fidelity must lie in [0, 1]");
  }
  if (dimension < 2) throw InvalidArgument("Hilbert dimension must be >= 2");
  const double n = static_cast<double>(dimension);
  if (dimension == 2) return 1.0;
  return (n - 1.0) * std::pow(1.0 - fidelity, n - 2.0);
}

/// Exact Haar probability of F in [lo, hi]: (1 - lo)^(N-1) - (1 - hi)^(N-1).
inline double haar_bin_mass(double lo, double hi, long long dimension) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
    throw InvalidArgument("bin edges must satisfy 0 <= lo <= hi <= 1");
  }
  if (dimension < 2) throw InvalidArgument("Hilbert dimension must be >= 2");
  const double e = static_cast<double>(dimension) - 1.0;
  return std::pow(1.0 - lo, e) - std::pow(1.0 - hi, e);
}

/// arccos(r1) + pi * H(0.5 - r2) with the step H(0) = 1. Maps r1 ~ U(-1, 1),
/// r2 ~ U(0, 1) onto [0, 2 pi] with density proportional to |sin|.
inline double nonuniform_angle(double r1, double r2) {
  if (!(r1 >= -1.0 && r1 <= 1.0)) throw InvalidArgument("r1 must lie in [-1, 1]");
  if (!(r2 >= 0.0 && r2 <= 1.0)) throw InvalidArgument("r2 must lie in [0, 1]");
  const double step = (0.5 - r2) >= 0.0 ? 1.0 : 0.0;
  return std::acos(r1) + std::numbers::pi * step;
}

enum class Sampler { Uniform, NonUniform };

inline std::string_view sampler_name(Sampler s) {
  return s == Sampler::Uniform ? "uniform" : "nonuniform";
}

inline std::optional<Sampler> parse_sampler(std::string_view name) {
  if (name == "uniform") return Sampler::Uniform;
  if (name == "nonuniform") return Sampler::NonUniform;
  return std::nullopt;
}

/// One parameter vector. Uniform draws every angle from [-pi, pi);
/// NonUniform draws parameters that feed RZ gates with nonuniform_angle and
/// the rest uniformly.
inline ParameterVector draw_parameters(const ParameterizedCircuit& circuit,
                                       Sampler sampler, Rng& rng) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> r1(-1.0, 1.0);
  std::uniform_real_distribution<double> r2(0.0, 1.0);
  const auto kinds = circuit.parameter_kinds();
  ParameterVector theta(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (sampler == Sampler::NonUniform && kinds[i] == GateKind::RZ) {
      const double a = r1(rng);
      theta[i] = nonuniform_angle(a, r2(rng));
    } else {
      theta[i] = angle(rng);
    }
  }
  return theta;
}

/// M fidelities between states at independently drawn parameter pairs.
/// Ideal mode compares pure states; with a noise model both states are
/// density matrices and the Uhlmann fidelity is used. Repetition i draws
/// from its own stream derived from (seed, i), so the list does not depend
/// on `jobs`.
inline std::vector<double> sample_fidelities(const ParameterizedCircuit& circuit,
                                             long long samples, Sampler sampler,
                                             const NoiseModel* noise,
                                             std::uint64_t seed, int jobs = 1) {
  if (samples < 1) throw InvalidArgument("sample count must be >= 1");
  if (noise) noise->check_covers(circuit);
  std::vector<double> out(static_cast<std::size_t>(samples));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(i)});
    const auto theta = draw_parameters(circuit, sampler, rng);
    const auto phi = draw_parameters(circuit, sampler, rng);
    if (noise) {
      out[i] = fidelity(simulate_noisy(circuit, theta, *noise),
                        simulate_noisy(circuit, phi, *noise));
    } else {
      out[i] = fidelity(simulate_ideal(circuit, theta), simulate_ideal(circuit, phi));
    }
  });
  return out;
}

/// Counts over uniform bins on [0, 1]; F = 1 lands in the last bin.
struct FidelityHistogram {
  int bin_count = 0;
  std::vector<long long> counts;
  long long total = 0;

  static FidelityHistogram from_samples(std::span<const double> fidelities,
                                        int bins) {
    if (bins < 1) throw InvalidArgument("bin count must be >= 1");
    FidelityHistogram h;
    h.bin_count = bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double f : fidelities) {
      if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("fidelity outside [0, 1]");
      auto b = static_cast<long long>(f * bins);
      if (b >= bins) b = bins - 1;
      ++h.counts[static_cast<std::size_t>(b)];
      ++h.total;
    }
    return h;
  }

  double edge(int i) const {
    return i == bin_count ? 1.0 : static_cast<double>(i) / bin_count;
  }
};

/// KL(P_hat || Haar) in nats with Haar masses integrated exactly per bin.
/// Empty empirical bins contribute nothing.
inline double kl_divergence(const FidelityHistogram& h, long long dimension) {
  if (h.total < 1) throw InvalidArgument("histogram is empty");
  double kl = 0.0;
  for (int i = 0; i < h.bin_count; ++i) {
    const auto c = h.counts[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(h.total);
    const double q = haar_bin_mass(h.edge(i), h.edge(i + 1), dimension);
    kl += p * std::log(p / q);
  }
  return std::max(kl, 0.0);
}

struct ExpressibilityOptions {
  long long samples = 5000;
  int bins = 75;
  Sampler sampler = Sampler::Uniform;
  const NoiseModel* noise = nullptr;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct ExpressibilityResult {
  std::string label;
  std::string mode;  // "ideal" or "noisy:<device>"
  Sampler sampler = Sampler::Uniform;
  long long samples = 0;
  int bins = 0;
  double value = 0.0;
  FidelityHistogram histogram;
};

inline ExpressibilityResult estimate_expressibility(
    const ParameterizedCircuit& circuit, const ExpressibilityOptions& opt) {
  if (opt.bins < 1) throw InvalidArgument("bin count must be >= 1");
  const auto fids = sample_fidelities(circuit, opt.samples, opt.sampler,
                                      opt.noise, opt.seed, opt.jobs);
  ExpressibilityResult r;
  r.label = circuit.label();
  r.mode = opt.noise ? "noisy:" + opt.noise->name() : "ideal";
  r.sampler = opt.sampler;
  r.samples = opt.samples;
  r.bins = opt.bins;
  r.histogram = FidelityHistogram::from_samples(fids, opt.bins);
  r.value = kl_divergence(r.histogram, 1LL << circuit.n_qubits());
  return r;
}

/// `bin_low,bin_high,count` rows.
inline std::string histogram_csv(const FidelityHistogram& h) {
  std::string out = "bin_low,bin_high,count\n";
  for (int i = 0; i < h.bin_count; ++i) {
    out += fmt::format("{:.6f},{:.6f},{}\n", h.edge(i), h.edge(i + 1),
                       h.counts[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// `label,mode,sampler,M,bins,value`.
inline std::string summary_line(const ExpressibilityResult& r) {
  return fmt::format("{},{},{},{},{},{:.6f}", r.label, r.mode,
                     sampler_name(r.sampler), r.samples, r.bins, r.value);
}

}  // namespace heabench
