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
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "heabench/circuit.hpp"
#include "heabench/error.hpp"
#include "heabench/hamiltonian.hpp"
#include "heabench/noise.hpp"
#include "heabench/rng.hpp"

namespace heabench {

/// Gain sequences a_k = a / (k + 1 + A)^alpha and c_k = c / (k + 1)^gamma.
/// When `a` is unset it is calibrated from `calibration_samples` gradient
/// probes at theta0 so the first update moves each parameter by about
/// `target_step` radians.
struct SPSAConfig {
  int max_iterations = 200;
  std::optional<double> a;
  double c = 0.1;
  double alpha = 0.602;
  double gamma = 0.101;
  std::optional<double> stability;  // A; defaults to 0.1 * max_iterations
  int calibration_samples = 25;
  double target_step = 0.2;
  std::uint64_t seed = 0;

  double stability_offset() const {
    return stability.value_or(0.1 * static_cast<double>(max_iterations));
  }

  void validate() const {
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (a && !(*a > 0.0)) throw InvalidArgument("SPSA gain a must be > 0");
    if (!(c > 0.0)) throw InvalidArgument("SPSA perturbation c must be > 0");
    if (!(gamma > 0.0 && gamma < alpha && alpha <= 1.0)) {
      throw InvalidArgument("SPSA exponents need 0 < gamma < alpha <= 1");
    }
    if (!(stability_offset() >= 0.0)) throw InvalidArgument("SPSA A must be >= 0");
    if (!a && calibration_samples < 1) {
      throw InvalidArgument("calibrating a needs calibration_samples >= 1");
    }
    if (!(target_step > 0.0)) throw InvalidArgument("target_step must be > 0");
  }

  /// Objective calls made by spsa_minimize with this configuration.
  long long evaluation_budget() const {
    return 2LL * max_iterations + (a ? 0LL : 2LL * calibration_samples);
  }
};

/// Objective receiving the point and the running evaluation index (used by
/// shot-sampled objectives to pick an RNG stream).
using SPSAObjective =
    std::function<EnergyEstimate(std::span<const double>, std::uint64_t)>;

struct SPSAStep {
  ParameterVector theta;
  EnergyEstimate estimate;
};

struct SPSAResult {
  ParameterVector best_theta;
  EnergyEstimate best_estimate;
  std::vector<SPSAStep> trace;
  long long evaluations = 0;
  double gain_a = 0.0;
};

/// Simultaneous-perturbation stochastic approximation. Each iteration spends
/// exactly two objective calls at theta_k +/- c_k Delta_k (Rademacher
/// Delta_k) and records the better of the two; the returned point is the
/// best recorded one, not the last iterate.
inline SPSAResult spsa_minimize(const SPSAObjective& objective,
                                ParameterVector theta, const SPSAConfig& config) {
  config.validate();
  if (theta.empty()) throw InvalidArgument("SPSA needs at least one parameter");
  const std::size_t dim = theta.size();
  Rng rng = make_rng(config.seed, {0x5b5aULL});
  std::bernoulli_distribution coin(0.5);

  SPSAResult result;
  std::uint64_t evals = 0;
  auto eval = [&](const ParameterVector& x) {
    const EnergyEstimate e = objective(x, evals++);
    if (!std::isfinite(e.value)) {
      std::string where;
      for (double v : x) where += (where.empty() ? "" : ", ") + std::to_string(v);
      throw NumericalError("SPSA objective returned a non-finite value at (" +
                           where + ")");
    }
    return e;
  };
  auto draw_delta = [&] {
    std::vector<double> d(dim);
    for (auto& v : d) v = coin(rng) ? 1.0 : -1.0;
    return d;
  };
  auto perturbed = [&](const std::vector<double>& delta, double ck, double sign) {
    ParameterVector x = theta;
    for (std::size_t i = 0; i < dim; ++i) x[i] += sign * ck * delta[i];
    return x;
  };

  const double big_a = config.stability_offset();
  double a = 0.0;
  if (config.a) {
    a = *config.a;
  } else {
    double mean_grad = 0.0;
    for (int s = 0; s < config.calibration_samples; ++s) {
      const auto delta = draw_delta();
      const double fp = eval(perturbed(delta, config.c, +1.0)).value;
      const double fm = eval(perturbed(delta, config.c, -1.0)).value;
      mean_grad += std::abs(fp - fm) / (2.0 * config.c);
    }
    mean_grad /= config.calibration_samples;
    const double scale = std::pow(big_a + 1.0, config.alpha);
    a = mean_grad > 1e-12 ? config.target_step * scale / mean_grad
                          : config.target_step * scale;
  }
  result.gain_a = a;

  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < config.max_iterations; ++k) {
    const double ak = a / std::pow(k + 1.0 + big_a, config.alpha);
    const double ck = config.c / std::pow(k + 1.0, config.gamma);
    const auto delta = draw_delta();
    ParameterVector xp = perturbed(delta, ck, +1.0);
    ParameterVector xm = perturbed(delta, ck, -1.0);
    const EnergyEstimate fp = eval(xp);
    const EnergyEstimate fm = eval(xm);

    SPSAStep step = fp.value <= fm.value ? SPSAStep{std::move(xp), fp}
                                         : SPSAStep{std::move(xm), fm};
    if (step.estimate.value < best) {
      best = step.estimate.value;
      result.best_theta = step.theta;
      result.best_estimate = step.estimate;
    }
    result.trace.push_back(std::move(step));

    const double slope = (fp.value - fm.value) / (2.0 * ck);
    for (std::size_t i = 0; i < dim; ++i) theta[i] -= ak * slope / delta[i];
  }
  result.evaluations = static_cast<long long>(evals);
  return result;
}

/// Signed accuracy metric: best_energy - reference (positive above the true
/// ground state).
inline double energy_difference(double best_energy, double reference) {
  if (!std::isfinite(best_energy) || !std::isfinite(reference)) {
    throw InvalidArgument("energy_difference needs finite inputs");
  }
  return best_energy - reference;
}

struct VQEResult {
  std::string label;
  ParameterVector best_theta;
  double best_energy = 0.0;
  double best_standard_error = 0.0;
  double reference_energy = 0.0;
  double energy_difference = 0.0;
  std::vector<SPSAStep> trace;
  long long evaluations_used = 0;
  std::uint64_t seed = 0;
};

/// Energy of `circuit` at theta: shot-sampled when shots > 0, exact
/// expectation of the simulated state when shots == 0.
inline EnergyEstimate evaluate_energy(const PauliHamiltonian& h,
                                      const ParameterizedCircuit& circuit,
                                      std::span<const double> theta,
                                      long long shots, const NoiseModel* noise,
                                      std::uint64_t seed) {
  if (shots < 0) throw InvalidArgument("shots must be >= 0");
  if (shots > 0) return expectation_sampled(h, circuit, theta, shots, noise, seed);
  const double e = noise ? expectation_exact(h, simulate_noisy(circuit, theta, *noise))
                         : expectation_exact(h, simulate_ideal(circuit, theta));
  return {e, 0.0, 0};
}

/// Uniform initial point over [-pi, pi) per parameter.
inline ParameterVector initial_parameters(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x1417ULL});
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  ParameterVector theta(static_cast<std::size_t>(n));
  for (auto& v : theta) v = u(rng);
  return theta;
}

/// Full VQE loop: SPSA over the sampled energy, then the best point is
/// re-measured with 4x shots for the reported energy.
inline VQEResult run_vqe(const ParameterizedCircuit& circuit,
                         const PauliHamiltonian& h, const SPSAConfig& config,
                         long long shots, const NoiseModel* noise,
                         double reference_energy) {
  if (circuit.n_qubits() != h.n_qubits()) {
    throw InvalidArgument("circuit and Hamiltonian qubit counts differ");
  }
  if (circuit.n_parameters() < 1) {
    throw InvalidArgument("VQE needs a circuit with parameters");
  }
  if (shots < 0) throw InvalidArgument("shots must be >= 0");
  if (noise) noise->check_covers(circuit);

  const std::uint64_t seed = config.seed;
  auto objective = [&](std::span<const double> theta, std::uint64_t k) {
    return evaluate_energy(h, circuit, theta, shots, noise,
                           derive_seed(seed, {0xE7A1ULL, k}));
  };
  const SPSAResult opt = spsa_minimize(
      objective, initial_parameters(circuit.n_parameters(), seed), config);

  const EnergyEstimate final = evaluate_energy(
      h, circuit, opt.best_theta, 4 * shots, noise, derive_seed(seed, {0xF1A1ULL}));

  VQEResult r;
  r.label = circuit.label();
  r.best_theta = opt.best_theta;
  r.best_energy = final.value;
  r.best_standard_error = final.standard_error;
  r.reference_energy = reference_energy;
  r.energy_difference = energy_difference(final.value, reference_energy);
  r.trace = opt.trace;
  r.evaluations_used = opt.evaluations + 1;
  r.seed = seed;
  return r;
}

/// Per-iteration trace as `iter,energy,std_err` CSV.
inline std::string trace_csv(const VQEResult& r) {
  std::string out = "iter,energy,std_err\n";
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    out += fmt::format("{},{:.10f},{:.10f}\n", k, r.trace[k].estimate.value,
                       r.trace[k].estimate.standard_error);
  }
  return out;
}

}  // namespace heabench
