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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "heabench/circuit.hpp"
#include "heabench/error.hpp"
#include "heabench/expressibility.hpp"
#include "heabench/hamiltonian.hpp"
#include "heabench/noise.hpp"
#include "heabench/parallel.hpp"
#include "heabench/vqe.hpp"

namespace heabench {

/// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pearson: length mismatch");
  if (xs.size() < 3) throw InvalidArgument("pearson: need at least 3 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw InvalidArgument("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw InvalidArgument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile q must lie in [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

namespace detail {

/// Labels that parse as integers order numerically and before other labels.
inline bool label_less(const std::string& a, const std::string& b) {
  auto as_int = [](const std::string& s) -> std::optional<long long> {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto ia = as_int(a), ib = as_int(b);
  if (ia && ib) return *ia < *ib;
  if (ia != ib && (ia || ib)) return ia.has_value();
  return a < b;
}

}  // namespace detail

enum class RankKey { Expressibility, EnergyDifference };

/// One circuit's row in a ranking table.
struct MetricRecord {
  std::string label;
  std::string gates;
  std::optional<double> expressibility;
  std::optional<double> ground_energy;
  std::optional<double> energy_difference;

  std::optional<double> metric(RankKey key) const {
    return key == RankKey::Expressibility ? expressibility : energy_difference;
  }
};

struct RankingTable {
  RankKey key = RankKey::EnergyDifference;
  std::vector<MetricRecord> rows;
};

/// Stable ascending sort by `key`; equal metrics fall back to label order.
inline RankingTable rank_circuits(std::vector<MetricRecord> records, RankKey key) {
  for (const auto& r : records) {
    if (!r.metric(key)) {
      throw InvalidArgument("rank_circuits: circuit " + r.label + " lacks the metric");
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [key](const MetricRecord& a, const MetricRecord& b) {
                     const double ma = *a.metric(key), mb = *b.metric(key);
                     if (ma != mb) return ma < mb;
                     return detail::label_less(a.label, b.label);
                   });
  return {key, std::move(records)};
}

namespace detail {

/// RFC 4180 quoting for fields containing commas or quotes.
inline std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

}  // namespace detail

/// `circuit,gates,expressibility,ground_energy,energy_diff`; missing
/// metrics are left empty.
inline std::string ranking_csv(const RankingTable& t) {
  std::string out = "circuit,gates,expressibility,ground_energy,energy_diff\n";
  for (const auto& r : t.rows) {
    out += fmt::format("{},{},{},{},{}\n", detail::csv_field(r.label),
                       detail::csv_field(r.gates),
                       detail::fmt_opt(r.expressibility),
                       detail::fmt_opt(r.ground_energy),
                       detail::fmt_opt(r.energy_difference));
  }
  return out;
}

enum class OutlierPolicy { None, MedianIqr };

struct CorrelationPoint {
  std::string label;
  double expressibility = 0.0;
  double energy_difference = 0.0;
  bool excluded = false;
  std::string reason;
};

struct CorrelationReport {
  double r = 0.0;
  std::vector<CorrelationPoint> points;  // label order

  std::vector<std::string> excluded() const {
    std::vector<std::string> out;
    for (const auto& p : points) {
      if (p.excluded) out.push_back(p.label);
    }
    return out;
  }
};

/// Joins expressibility and VQE results on label (several results per label
/// are reduced to their median), drops outliers per `policy` and correlates
/// the rest. MedianIqr excludes points whose energy difference exceeds
/// median + iqr_factor * IQR.
inline CorrelationReport correlation_study(std::span<const ExpressibilityResult> expr,
                                           std::span<const VQEResult> vqe,
                                           OutlierPolicy policy,
                                           double iqr_factor = 5.0) {
  std::map<std::string, std::vector<double>> ex, df;
  for (const auto& e : expr) ex[e.label].push_back(e.value);
  for (const auto& v : vqe) df[v.label].push_back(v.energy_difference);
  for (const auto& [label, _] : ex) {
    if (!df.count(label)) throw InvalidArgument("no VQE result for circuit " + label);
  }
  for (const auto& [label, _] : df) {
    if (!ex.count(label)) {
      throw InvalidArgument("no expressibility result for circuit " + label);
    }
  }

  CorrelationReport rep;
  for (const auto& [label, values] : ex) {
    rep.points.push_back({label, median(values), median(df[label]), false, {}});
  }
  std::sort(rep.points.begin(), rep.points.end(),
            [](const auto& a, const auto& b) { return detail::label_less(a.label, b.label); });

  if (policy == OutlierPolicy::MedianIqr && !rep.points.empty()) {
    std::vector<double> diffs;
    for (const auto& p : rep.points) diffs.push_back(p.energy_difference);
    const double med = median(diffs);
    const double iqr = quantile(diffs, 0.75) - quantile(diffs, 0.25);
    const double cut = med + iqr_factor * iqr;
    for (auto& p : rep.points) {
      if (p.energy_difference > cut) {
        p.excluded = true;
        p.reason = fmt::format("energy_diff {:.6f} > median + {:g} IQR = {:.6f}",
                               p.energy_difference, iqr_factor, cut);
      }
    }
  }

  std::vector<double> xs, ys;
  for (const auto& p : rep.points) {
    if (p.excluded) continue;
    xs.push_back(p.expressibility);
    ys.push_back(p.energy_difference);
  }
  rep.r = pearson(xs, ys);
  return rep;
}

/// `circuit,expressibility,energy_diff,excluded`.
inline std::string scatter_csv(const CorrelationReport& rep) {
  std::string out = "circuit,expressibility,energy_diff,excluded\n";
  for (const auto& p : rep.points) {
    out += fmt::format("{},{:.6f},{:.6f},{}\n", p.label, p.expressibility,
                       p.energy_difference, p.excluded ? 1 : 0);
  }
  return out;
}

/// Shared settings for batches of VQE runs.
struct VQESettings {
  SPSAConfig spsa;  // seed is overwritten per run
  long long shots = 1024;
  std::vector<std::uint64_t> seeds;
  double reference_energy = 0.0;
  int jobs = 1;
};

/// Consecutive seeds base, base + 1, ...
inline std::vector<std::uint64_t> seed_list(std::uint64_t base, int count) {
  if (count < 1) throw InvalidArgument("seed count must be >= 1");
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
  return out;
}

/// Runs every (circuit, seed) pair under one optional noise model; results
/// come back in (circuit, seed) input order.
inline std::vector<VQEResult> vqe_batch(std::span<const ParameterizedCircuit> circuits,
                                        const PauliHamiltonian& h,
                                        const VQESettings& s, const NoiseModel* noise) {
  if (s.seeds.empty()) throw InvalidArgument("seed list is empty");
  const std::size_t ns = s.seeds.size();
  std::vector<VQEResult> out(circuits.size() * ns);
  parallel_for(out.size(), s.jobs, [&](std::size_t i) {
    SPSAConfig cfg = s.spsa;
    cfg.seed = s.seeds[i % ns];
    out[i] = run_vqe(circuits[i / ns], h, cfg, s.shots, noise, s.reference_energy);
  });
  return out;
}

/// One expressibility estimate per (circuit, seed), in that order.
inline std::vector<ExpressibilityResult> expressibility_batch(
    std::span<const ParameterizedCircuit> circuits, const ExpressibilityOptions& base,
    std::span<const std::uint64_t> seeds) {
  std::vector<ExpressibilityResult> out;
  for (const auto& c : circuits) {
    for (auto seed : seeds) {
      auto opt = base;
      opt.seed = seed;
      out.push_back(estimate_expressibility(c, opt));
    }
  }
  return out;
}

struct SweepRow {
  std::string model;
  std::string circuit;
  double energy_difference = 0.0;
  std::uint64_t seed = 0;
};

/// Zoo circuits used by the sweep when none are named.
inline std::vector<int> default_sweep_circuits() { return {1, 2, 9, 10, 11, 12}; }

/// VQE over the cross product of models, circuits and seeds, ordered by
/// (model name, circuit label, seed).
inline std::vector<SweepRow> noise_model_sweep(
    std::span<const ParameterizedCircuit> circuits, std::span<const NoiseModel> models,
    const PauliHamiltonian& h, const VQESettings& s) {
  if (models.empty()) throw InvalidArgument("noise-model sweep needs at least one model");
  if (circuits.empty()) throw InvalidArgument("noise-model sweep needs at least one circuit");
  if (s.seeds.empty()) throw InvalidArgument("seed list is empty");
  for (const auto& m : models) {
    for (const auto& c : circuits) m.check_covers(c);
  }
  const std::size_t nc = circuits.size(), ns = s.seeds.size();
  std::vector<SweepRow> rows(models.size() * nc * ns);
  parallel_for(rows.size(), s.jobs, [&](std::size_t i) {
    const auto& model = models[i / (nc * ns)];
    const auto& circuit = circuits[(i / ns) % nc];
    SPSAConfig cfg = s.spsa;
    cfg.seed = s.seeds[i % ns];
    const auto r = run_vqe(circuit, h, cfg, s.shots, &model, s.reference_energy);
    rows[i] = {model.name(), circuit.label(), r.energy_difference, cfg.seed};
  });
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.model != b.model) return a.model < b.model;
    if (a.circuit != b.circuit) return detail::label_less(a.circuit, b.circuit);
    return a.seed < b.seed;
  });
  return rows;
}

/// `model,circuit,energy_diff,seed`.
inline std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "model,circuit,energy_diff,seed\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.6f},{}\n", r.model, r.circuit, r.energy_difference,
                       r.seed);
  }
  return out;
}

/// Per model, circuit labels ordered by ascending median energy difference.
inline std::map<std::string, std::vector<std::string>> sweep_orderings(
    std::span<const SweepRow> rows) {
  std::map<std::string, std::map<std::string, std::vector<double>>> grouped;
  for (const auto& r : rows) grouped[r.model][r.circuit].push_back(r.energy_difference);
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [model, per_circuit] : grouped) {
    std::vector<std::pair<double, std::string>> v;
    for (const auto& [label, diffs] : per_circuit) v.emplace_back(median(diffs), label);
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return detail::label_less(a.second, b.second);
    });
    for (auto& [_, label] : v) out[model].push_back(label);
  }
  return out;
}

}  // namespace heabench
