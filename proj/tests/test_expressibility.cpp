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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heabench/expressibility.hpp"
#include "heabench/io.hpp"
#include "heabench/zoo.hpp"

using namespace heabench;

namespace {

FidelityHistogram make_hist(std::vector<long long> counts) {
  FidelityHistogram h;
  h.bin_count = static_cast<int>(counts.size());
  for (auto c : counts) h.total += c;
  h.counts = std::move(counts);
  return h;
}

}  // namespace

TEST(HaarPdf, PointValues) {
  EXPECT_DOUBLE_EQ(haar_pdf(0.0, 16), 15.0);
  EXPECT_DOUBLE_EQ(haar_pdf(0.3, 2), 1.0);
  EXPECT_DOUBLE_EQ(haar_pdf(1.0, 16), 0.0);
  EXPECT_THROW(haar_pdf(1.5, 4), InvalidArgument);
  EXPECT_THROW(haar_pdf(0.5, 1), InvalidArgument);
}

TEST(HaarPdf, IntegratesToOne) {
  for (long long n : {2LL, 4LL, 16LL, 256LL}) {
    // Antiderivative -(1 - F)^(N-1) evaluated on [0, 1].
    const double integral = haar_bin_mass(0.0, 1.0, n);
    EXPECT_NEAR(integral, 1.0, 1e-8) << n;
    // Composite Simpson on the PDF as an independent check.
    const int steps = 20000;
    double s = haar_pdf(0.0, n) + haar_pdf(1.0, n);
    for (int i = 1; i < steps; ++i) {
      s += (i % 2 ? 4.0 : 2.0) * haar_pdf(static_cast<double>(i) / steps, n);
    }
    EXPECT_NEAR(s / (3.0 * steps), 1.0, 1e-8) << n;
  }
}

TEST(NonuniformAngle, Examples) {
  EXPECT_DOUBLE_EQ(nonuniform_angle(1.0, 0.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(nonuniform_angle(0.0, 1.0), std::numbers::pi / 2.0);
  EXPECT_DOUBLE_EQ(nonuniform_angle(-1.0, 0.0), 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(nonuniform_angle(1.0, 0.5), std::numbers::pi);  // H(0) = 1
  EXPECT_THROW(nonuniform_angle(1.5, 0.1), InvalidArgument);
  EXPECT_THROW(nonuniform_angle(0.5, -0.1), InvalidArgument);
}

TEST(NonuniformAngle, OnlyRZParametersAreReshaped) {
  const auto c = load_circuit("qubits 1\nry q0 p0\nrz q0 p1");
  Rng rng = make_rng(5, {});
  for (int i = 0; i < 200; ++i) {
    const auto t = draw_parameters(c, Sampler::NonUniform, rng);
    EXPECT_GE(t[0], -std::numbers::pi);
    EXPECT_LT(t[0], std::numbers::pi);
    EXPECT_GE(t[1], 0.0);
    EXPECT_LE(t[1], 2.0 * std::numbers::pi);
  }
}

TEST(SampleFidelities, ParameterFreeCircuit) {
  const auto c = load_circuit("qubits 1\nh q0");
  for (double f : sample_fidelities(c, 100, Sampler::Uniform, nullptr, 1)) {
    EXPECT_NEAR(f, 1.0, 1e-12);
  }
}

TEST(SampleFidelities, MeanMatchesClosedForm) {
  const auto c = load_circuit(read_text_file(default_data_dir() / "circuits" / "h_rz.circ"));
  const auto f = sample_fidelities(c, 5000, Sampler::Uniform, nullptr, 2);
  double mean = 0.0;
  for (double v : f) mean += v;
  EXPECT_NEAR(mean / 5000.0, 0.5, 0.02);
}

TEST(SampleFidelities, DeterministicAndJobIndependent) {
  const auto c = zoo_circuit(5);
  const auto a = sample_fidelities(c, 300, Sampler::Uniform, nullptr, 11, 1);
  const auto b = sample_fidelities(c, 300, Sampler::Uniform, nullptr, 11, 4);
  EXPECT_EQ(a, b);
  EXPECT_THROW(sample_fidelities(c, 0, Sampler::Uniform, nullptr, 1), InvalidArgument);
}

TEST(Histogram, Binning) {
  const std::vector<double> f = {0.0, 0.5, 0.999, 1.0};
  const auto h = FidelityHistogram::from_samples(f, 4);
  EXPECT_EQ(h.counts, (std::vector<long long>{1, 0, 1, 2}));
  EXPECT_EQ(h.total, 4);
  EXPECT_THROW(FidelityHistogram::from_samples(f, 0), InvalidArgument);
  const std::vector<double> bad = {1.2};
  EXPECT_THROW(FidelityHistogram::from_samples(bad, 3), InvalidArgument);
}

TEST(KL, ExactMatchIsZero) {
  // N = 2 is uniform on [0, 1].
  EXPECT_NEAR(kl_divergence(make_hist({10, 10}), 2), 0.0, 1e-15);
  // N = 3: masses (1 - lo)^2 - (1 - hi)^2 on halves are 3/4 and 1/4.
  EXPECT_NEAR(kl_divergence(make_hist({3, 1}), 3), 0.0, 1e-15);
}

TEST(KL, AllMassInLastBin) {
  const int bins = 75;
  std::vector<long long> counts(bins, 0);
  counts.back() = 5000;
  const double q_last = std::pow(1.0 - 74.0 / 75.0, 15.0);
  EXPECT_NEAR(kl_divergence(make_hist(counts), 16), -std::log(q_last), 1e-9);
}

TEST(KL, NonNegativeOnRandomHistograms) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(0, 50);
  std::uniform_int_distribution<int> nbins(1, 100);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<long long> c(static_cast<std::size_t>(nbins(rng)));
    for (auto& v : c) v = count(rng);
    c[0] += 1;
    ASSERT_GE(kl_divergence(make_hist(c), 1LL << (1 + trial % 8)), 0.0);
  }
}

TEST(KL, MultinomialFromHaarIsSmall) {
  const int bins = 75;
  std::vector<double> q(bins);
  for (int i = 0; i < bins; ++i) {
    q[static_cast<std::size_t>(i)] =
        haar_bin_mass(static_cast<double>(i) / bins,
                      i + 1 == bins ? 1.0 : static_cast<double>(i + 1) / bins, 16);
  }
  std::mt19937_64 rng(37);
  std::discrete_distribution<int> draw(q.begin(), q.end());
  std::vector<long long> counts(bins, 0);
  for (int s = 0; s < 5000; ++s) ++counts[static_cast<std::size_t>(draw(rng))];
  EXPECT_LT(kl_divergence(make_hist(counts), 16), 0.02);
}

TEST(Expressibility, SummaryAndHistogramFormats) {
  ExpressibilityOptions opt;
  opt.samples = 200;
  opt.bins = 5;
  opt.seed = 3;
  const auto r = estimate_expressibility(zoo_circuit(12), opt);
  EXPECT_EQ(r.mode, "ideal");
  const auto line = summary_line(r);
  EXPECT_EQ(line.substr(0, line.find(",", 3)), "12,ideal");
  const auto csv = histogram_csv(r.histogram);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bin_low,bin_high,count");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_EQ(histogram_csv(estimate_expressibility(zoo_circuit(12), opt).histogram), csv);
  opt.bins = 0;
  EXPECT_THROW(estimate_expressibility(zoo_circuit(12), opt), InvalidArgument);
}

TEST(Expressibility, IdealPartialOrder) {
  // {11, 12} < {1..8} < {9, 10}, with gaps over 3 seed standard deviations.
  auto stats = [](int id) {
    std::vector<double> v;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ExpressibilityOptions opt;
      opt.seed = seed;
      v.push_back(estimate_expressibility(zoo_circuit(id), opt).value);
    }
    double m = 0.0, s = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, std::sqrt(s / static_cast<double>(v.size() - 1))};
  };
  std::vector<std::pair<double, double>> st(kZooSize + 1);
  for (int id = 1; id <= kZooSize; ++id) st[static_cast<std::size_t>(id)] = stats(id);
  auto gap_ok = [&](int lo, int hi) {
    const auto [ml, sl] = st[static_cast<std::size_t>(lo)];
    const auto [mh, sh] = st[static_cast<std::size_t>(hi)];
    return mh - ml > 3.0 * std::max(sl, sh);
  };
  for (int low : {11, 12}) {
    for (int mid = 1; mid <= 8; ++mid) EXPECT_TRUE(gap_ok(low, mid)) << low << " vs " << mid;
  }
  for (int mid = 1; mid <= 8; ++mid) {
    for (int high : {9, 10}) EXPECT_TRUE(gap_ok(mid, high)) << mid << " vs " << high;
  }
}
