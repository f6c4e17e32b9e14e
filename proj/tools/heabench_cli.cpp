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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "heabench.hpp"

namespace fs = std::filesystem;
using namespace heabench;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kNumerical = 3 };

struct Globals {
  std::uint64_t seed = 1;
  int seeds = 5;
  long long shots = 1024;
  int jobs = default_jobs();
  std::string out;
  std::string data_dir = default_data_dir().string();
  int max_iterations = 200;
  std::optional<double> spsa_a;
  double spsa_c = 0.1;
};

fs::path data_path(const Globals& g, const std::string& rel) {
  return fs::path(g.data_dir) / rel;
}

ParameterizedCircuit resolve_circuit(const Globals& g, const std::string& spec) {
  if (!spec.empty() &&
      spec.find_first_not_of("0123456789") == std::string::npos) {
    return zoo_circuit(std::stoi(spec), g.data_dir);
  }
  return load_circuit(read_text_file(spec), fs::path(spec).stem().string());
}

PauliHamiltonian load_ham(const Globals& g, const std::string& path) {
  const std::string p =
      path.empty() ? data_path(g, "hamiltonians/h2_sto3g_0735.ham").string() : path;
  try {
    return parse_hamiltonian(read_text_file(p));
  } catch (const ParseError& e) {
    throw ParseError(p + ": " + e.what());
  }
}

NoiseModel load_noise(const std::string& path) {
  DeviceCalibration cal;
  try {
    cal = parse_calibration(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  NoiseModel m = build_noise_model(cal);
  for (const auto& w : m.warnings()) fmt::print(stderr, "warning: {}: {}\n", path, w);
  return m;
}

VQESettings vqe_settings(const Globals& g, double reference) {
  VQESettings s;
  s.spsa.max_iterations = g.max_iterations;
  s.spsa.a = g.spsa_a;
  s.spsa.c = g.spsa_c;
  s.shots = g.shots;
  s.seeds = seed_list(g.seed, g.seeds);
  s.reference_energy = reference;
  s.jobs = g.jobs;
  return s;
}

/// Writes `text` to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    fmt::print("{}", text);
  } else {
    const auto path = fs::path(g.out) / name;
    write_text_file(path, text);
    fmt::print(stderr, "wrote {}\n", path.string());
  }
}

std::vector<ParameterizedCircuit> zoo_list(const Globals& g, const std::vector<int>& ids) {
  std::vector<ParameterizedCircuit> out;
  for (int id : ids) out.push_back(zoo_circuit(id, g.data_dir));
  return out;
}

std::string vqe_rows(std::span<const VQEResult> results) {
  std::string out = "circuit,seed,best_energy,std_err,energy_diff,evaluations\n";
  for (const auto& r : results) {
    out += fmt::format("{},{},{:.10f},{:.10f},{:.10f},{}\n", r.label, r.seed,
                       r.best_energy, r.best_standard_error, r.energy_difference,
                       r.evaluations_used);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heabench: hardware-efficient ansatz benchmarking on simulated devices"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base seed; run i uses seed + i")->capture_default_str();
  app.add_option("--seeds", g.seeds, "Number of seeds per benchmark")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--shots", g.shots, "Shots per Pauli term (0 = exact expectation)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory for CSV files (default: stdout)");
  app.add_option("--data-dir", g.data_dir, "Directory with shipped circuits and data")
      ->capture_default_str();
  app.add_option("--max-iter", g.max_iterations, "SPSA iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--spsa-a", g.spsa_a, "SPSA gain a (default: calibrated)");
  app.add_option("--spsa-c", g.spsa_c, "SPSA perturbation c")->capture_default_str();

  // exact
  auto* exact = app.add_subcommand("exact", "Print the exact ground energy of a Hamiltonian");
  std::string exact_ham;
  exact->add_option("hamiltonian", exact_ham, "Hamiltonian file")->required();

  // jw
  auto* jw = app.add_subcommand("jw", "Map an integral file to a qubit Hamiltonian");
  std::string jw_in, jw_out;
  jw->add_option("integrals", jw_in, "Integral file")->required();
  jw->add_option("-o,--output", jw_out, "Write the Hamiltonian here instead of stdout");

  // vqe
  auto* vqe = app.add_subcommand("vqe", "Run VQE for one circuit over the seed list");
  std::string vqe_circuit, vqe_ham, vqe_noise;
  std::optional<double> vqe_ref;
  vqe->add_option("--circuit", vqe_circuit, "Zoo id (1-12) or circuit file")->required();
  vqe->add_option("--ham", vqe_ham, "Hamiltonian file (default: shipped H2)");
  vqe->add_option("--noise", vqe_noise, "Calibration file");
  vqe->add_option("--reference", vqe_ref, "Reference energy (default: exact ground)");

  // expressibility
  auto* expr = app.add_subcommand("expressibility", "Estimate expressibility of a circuit");
  std::string expr_circuit, expr_noise, expr_sampler = "uniform";
  long long expr_samples = 5000;
  int expr_bins = 75;
  expr->add_option("--circuit", expr_circuit, "Zoo id (1-12) or circuit file")->required();
  expr->add_option("--samples", expr_samples, "Fidelity pairs M")->capture_default_str();
  expr->add_option("--bins", expr_bins, "Histogram bins on [0, 1]")->capture_default_str();
  expr->add_option("--sampler", expr_sampler, "Parameter sampler")
      ->check(CLI::IsMember({"uniform", "nonuniform"}))
      ->capture_default_str();
  expr->add_option("--noise", expr_noise, "Calibration file (noisy mode)");

  // suite
  auto* suite = app.add_subcommand("suite", "Run a study over the circuit zoo");
  std::string suite_mode = "ideal", suite_what = "vqe", suite_ham, suite_cal;
  std::vector<std::string> suite_cals;
  std::vector<int> suite_circuits;
  long long suite_samples = 5000;
  suite->add_option("--mode", suite_mode, "Simulation mode")
      ->check(CLI::IsMember({"ideal", "noisy"}))
      ->capture_default_str();
  suite->add_option("--what", suite_what, "Study to run")
      ->check(CLI::IsMember({"vqe", "expr", "correlate", "sweep"}))
      ->capture_default_str();
  suite->add_option("--ham", suite_ham, "Hamiltonian file (default: shipped H2)");
  suite->add_option("--cal", suite_cal, "Calibration file for noisy mode");
  suite->add_option("--cals", suite_cals, "Calibration files for the sweep");
  suite->add_option("--circuits", suite_circuits,
                    "Zoo ids (default: all; sweep: 1 2 9 10 11 12)");
  suite->add_option("--samples", suite_samples, "Expressibility fidelity pairs M")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*exact) {
      const auto h = parse_hamiltonian(read_text_file(exact_ham));
      fmt::print("{:.10f}\n", exact_ground_energy(h));
    } else if (*jw) {
      const auto h = jordan_wigner(parse_integrals(read_text_file(jw_in)));
      const std::string text =
          "# qubit Hamiltonian (Jordan-Wigner); the last character acts on qubit 0\n" +
          h.to_text();
      if (jw_out.empty()) {
        fmt::print("{}", text);
      } else {
        write_text_file(jw_out, text);
      }
    } else if (*vqe) {
      const auto circuit = resolve_circuit(g, vqe_circuit);
      const auto h = load_ham(g, vqe_ham);
      std::optional<NoiseModel> noise;
      if (!vqe_noise.empty()) noise = load_noise(vqe_noise);
      const double ref = vqe_ref.value_or(exact_ground_energy(h));
      const auto s = vqe_settings(g, ref);
      const ParameterizedCircuit one[] = {circuit};
      const auto results = vqe_batch(one, h, s, noise ? &*noise : nullptr);
      std::vector<double> diffs;
      for (const auto& r : results) diffs.push_back(r.energy_difference);
      emit(g, "vqe_" + circuit.label() + ".csv", vqe_rows(results));
      if (!g.out.empty()) {
        for (const auto& r : results) {
          emit(g, fmt::format("trace_{}_seed{}.csv", r.label, r.seed), trace_csv(r));
        }
      }
      fmt::print(stderr, "median energy_diff {:.6f}\n", median(diffs));
    } else if (*expr) {
      if (expr_bins < 1) throw InvalidArgument("--bins must be >= 1");
      if (expr_samples < 1) throw InvalidArgument("--samples must be >= 1");
      const auto circuit = resolve_circuit(g, expr_circuit);
      std::optional<NoiseModel> noise;
      if (!expr_noise.empty()) noise = load_noise(expr_noise);
      ExpressibilityOptions opt;
      opt.samples = expr_samples;
      opt.bins = expr_bins;
      opt.sampler = *parse_sampler(expr_sampler);
      opt.noise = noise ? &*noise : nullptr;
      opt.seed = g.seed;
      opt.jobs = g.jobs;
      const auto r = estimate_expressibility(circuit, opt);
      fmt::print("label,mode,sampler,M,bins,value\n{}\n", summary_line(r));
      if (!g.out.empty()) {
        emit(g, fmt::format("hist_{}_{}_{}.csv", r.label, sampler_name(r.sampler),
                            noise ? noise->name() : "ideal"),
             histogram_csv(r.histogram));
      }
    } else if (*suite) {
      const auto h = load_ham(g, suite_ham);
      const double ref = exact_ground_energy(h);
      const auto s = vqe_settings(g, ref);

      if (suite_what == "sweep") {
        if (suite_cals.empty()) throw InvalidArgument("sweep needs --cals <files...>");
        std::vector<NoiseModel> models;
        for (const auto& c : suite_cals) models.push_back(load_noise(c));
        const auto ids = suite_circuits.empty() ? default_sweep_circuits() : suite_circuits;
        const auto circuits = zoo_list(g, ids);
        const auto rows = noise_model_sweep(circuits, models, h, s);
        emit(g, "sweep.csv", sweep_csv(rows));
        return kOk;
      }

      std::optional<NoiseModel> noise;
      if (suite_mode == "noisy") {
        if (suite_cal.empty()) throw InvalidArgument("noisy mode needs --cal <file>");
        noise = load_noise(suite_cal);
      }
      const NoiseModel* nm = noise ? &*noise : nullptr;
      std::vector<int> ids = suite_circuits;
      if (ids.empty()) {
        for (int i = 1; i <= kZooSize; ++i) ids.push_back(i);
      }
      const auto circuits = zoo_list(g, ids);

      std::vector<VQEResult> vqe_results;
      std::vector<ExpressibilityResult> expr_results;
      if (suite_what != "expr") vqe_results = vqe_batch(circuits, h, s, nm);
      if (suite_what != "vqe") {
        ExpressibilityOptions opt;
        opt.samples = suite_samples;
        opt.noise = nm;
        opt.jobs = g.jobs;
        expr_results = expressibility_batch(circuits, opt, s.seeds);
      }

      std::vector<MetricRecord> records;
      for (const auto& c : circuits) {
        MetricRecord m{c.label(), c.entangler_signature(), {}, {}, {}};
        std::vector<double> e, d, x;
        for (const auto& r : vqe_results) {
          if (r.label == c.label()) {
            e.push_back(r.best_energy);
            d.push_back(r.energy_difference);
          }
        }
        for (const auto& r : expr_results) {
          if (r.label == c.label()) x.push_back(r.value);
        }
        if (!e.empty()) m.ground_energy = median(e);
        if (!d.empty()) m.energy_difference = median(d);
        if (!x.empty()) m.expressibility = median(x);
        records.push_back(std::move(m));
      }
      const auto key = suite_what == "expr" ? RankKey::Expressibility
                                            : RankKey::EnergyDifference;
      emit(g, "ranking.csv", ranking_csv(rank_circuits(records, key)));
      if (!vqe_results.empty() && !g.out.empty()) emit(g, "vqe.csv", vqe_rows(vqe_results));
      if (suite_what == "correlate") {
        const auto rep = correlation_study(expr_results, vqe_results, OutlierPolicy::MedianIqr);
        emit(g, "scatter.csv", scatter_csv(rep));
        std::string excluded;
        for (const auto& l : rep.excluded()) excluded += (excluded.empty() ? "" : " ") + l;
        fmt::print(stderr, "pearson r {:.6f}; excluded: {}\n", rep.r,
                   excluded.empty() ? "none" : excluded);
      }
    }
  } catch (const FileError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (const MissingNoiseEntry& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical error: {}\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumerical;
  }
  return kOk;
}
