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
#include <limits>
#include <random>

#include "heabench/io.hpp"
#include "heabench/noise.hpp"
#include "oracles.hpp"

using namespace heabench;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kCalibrations[] = {"ibmqx2-like", "melbourne-like", "vigo-like",
                               "valencia-like", "armonk-like", "athens-like",
                               "santiago-like", "zero"};

DeviceCalibration load_cal(const std::string& name) {
  return parse_calibration(
      read_text_file(default_data_dir() / "calibrations" / (name + ".cal")));
}

CMatrix apply_channel(const KrausSet& k, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& op : k.operators()) out += op * rho * op.adjoint();
  return out;
}

/// 1 - mean <psi|E(psi)|psi> over Haar-random pure states.
double monte_carlo_infidelity(const KrausSet& k, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = k.arity();
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CVector psi = oracle::random_state(n, rng);
    acc += (psi.adjoint() * apply_channel(k, psi * psi.adjoint()) * psi)(0, 0).real();
  }
  return 1.0 - acc / samples;
}

void expect_cptp(const KrausSet& k, const std::string& what) {
  EXPECT_LE(k.completeness_error(), 1e-8) << what;
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(k.choi());
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8) << what;
}

}  // namespace

TEST(Depolarizing, Limits) {
  std::mt19937_64 rng(1);
  const CMatrix rho = oracle::random_density(1, rng);
  const auto id = depolarizing_channel(0.0, 1);
  EXPECT_NEAR((apply_channel(id, rho) - rho).norm(), 0.0, 1e-12);
  const auto full = depolarizing_channel(1.0, 1);
  EXPECT_NEAR((apply_channel(full, rho) - CMatrix::Identity(2, 2) / 2.0).norm(), 0.0, 1e-12);
}

TEST(Depolarizing, TwoQubitFormula) {
  std::mt19937_64 rng(2);
  const CMatrix rho = oracle::random_density(2, rng);
  const double p = 0.3;
  const CMatrix expect = (1 - p) * rho + p * CMatrix::Identity(4, 4) / 4.0;
  EXPECT_NEAR((apply_channel(depolarizing_channel(p, 2), rho) - expect).norm(), 0.0, 1e-12);
}

TEST(Depolarizing, RejectsBadArguments) {
  EXPECT_THROW(depolarizing_channel(-0.1, 1), InvalidArgument);
  EXPECT_THROW(depolarizing_channel(1.1, 1), InvalidArgument);
  EXPECT_THROW(depolarizing_channel(0.1, 3), InvalidArgument);
}

TEST(ThermalRelaxation, ZeroDurationIsIdentity) {
  std::mt19937_64 rng(3);
  const CMatrix rho = oracle::random_density(1, rng);
  const auto k = thermal_relaxation_channel(50.0, 70.0, 0.0);
  EXPECT_NEAR((apply_channel(k, rho) - rho).norm(), 0.0, 1e-12);
}

TEST(ThermalRelaxation, FullDecay) {
  CMatrix one = CMatrix::Zero(2, 2);
  one(1, 1) = 1.0;
  const double t1 = 40.0;
  const auto k = thermal_relaxation_channel(t1, 50.0, 1e6 * t1 * 1e3);
  const CMatrix out = apply_channel(k, one);
  EXPECT_NEAR(out(0, 0).real(), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(out(1, 1)), 0.0, 1e-9);
}

TEST(ThermalRelaxation, PureDephasingMatchesLindblad) {
  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  const double t1 = 1e9, t2 = 30.0, t_ns = 12000.0;
  const CMatrix got = apply_channel(thermal_relaxation_channel(t1, t2, t_ns), plus);
  const CMatrix expect = oracle::lindblad_relax(plus, t1, t2, t_ns * 1e-3);
  EXPECT_NEAR((got - expect).norm(), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(got(0, 1)), 0.5 * std::exp(-t_ns * 1e-3 / t2), 1e-9);
}

TEST(ThermalRelaxation, MatchesLindbladOnRandomStates) {
  std::mt19937_64 rng(4);
  const double params[][3] = {{50, 70, 300}, {80, 160, 5000}, {20, 5, 900}, {100, 100, 35}};
  for (const auto& p : params) {
    const auto k = thermal_relaxation_channel(p[0], p[1], p[2]);
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix rho = oracle::random_density(1, rng);
      const CMatrix expect = oracle::lindblad_relax(rho, p[0], p[1], p[2] * 1e-3);
      ASSERT_NEAR((apply_channel(k, rho) - expect).norm(), 0.0, 1e-9);
    }
  }
}

TEST(ThermalRelaxation, InfiniteTimesAndValidation) {
  const auto k = thermal_relaxation_channel(kInf, kInf, 500.0);
  EXPECT_EQ(k.operators().size(), 1U);
  EXPECT_THROW(thermal_relaxation_channel(10.0, 25.0, 10.0), InvalidArgument);
  EXPECT_THROW(thermal_relaxation_channel(0.0, 0.0, 10.0), InvalidArgument);
  EXPECT_THROW(thermal_relaxation_channel(10.0, 10.0, -1.0), InvalidArgument);
}

TEST(ThermalRelaxation, ContinuousInDuration) {
  std::mt19937_64 rng(5);
  std::vector<CMatrix> probes;
  for (int i = 0; i < 20; ++i) {
    const CVector v = oracle::random_state(1, rng);
    probes.push_back(v * v.adjoint());
  }
  auto distance = [&](double t, double dt) {
    const auto a = thermal_relaxation_channel(60.0, 80.0, t);
    const auto b = thermal_relaxation_channel(60.0, 80.0, t + dt);
    double worst = 0.0;
    for (const auto& rho : probes) {
      const Eigen::SelfAdjointEigenSolver<CMatrix> es(apply_channel(a, rho) -
                                                      apply_channel(b, rho));
      worst = std::max(worst, 0.5 * es.eigenvalues().cwiseAbs().sum());
    }
    return worst;
  };
  for (double t : {0.0, 100.0, 5000.0}) {
    const double d1 = distance(t, 1.0), d2 = distance(t, 2.0);
    EXPECT_LT(d1, 1e-4);
    EXPECT_NEAR(d2 / d1, 2.0, 0.05);
  }
}

TEST(Readout, Confusion) {
  Eigen::VectorXd uniform4 = Eigen::VectorXd::Constant(4, 0.25);
  const std::vector<Eigen::Matrix2d> id2(2, Eigen::Matrix2d::Identity());
  EXPECT_NEAR((readout_apply(id2, uniform4) - uniform4).norm(), 0.0, 1e-15);

  Eigen::Matrix2d flip;
  flip << 0, 1, 0, 1;  // p(1|0) = 1
  Eigen::VectorXd zero(2);
  zero << 1, 0;
  const std::vector<Eigen::Matrix2d> one = {flip};
  const auto out = readout_apply(one, zero);
  EXPECT_NEAR(out(1), 1.0, 1e-15);

  Eigen::Matrix2d sym;
  sym << 0.99, 0.01, 0.01, 0.99;
  const std::vector<Eigen::Matrix2d> two = {sym, sym};
  EXPECT_NEAR((readout_apply(two, uniform4) - uniform4).norm(), 0.0, 1e-15);

  Eigen::Matrix2d bad;
  bad << 0.5, 0.4, 0.0, 1.0;
  const std::vector<Eigen::Matrix2d> badv = {bad};
  EXPECT_THROW(readout_apply(badv, zero), InvalidArgument);
  EXPECT_THROW(readout_apply(two, zero), InvalidArgument);
}

TEST(Calibration, ParseAndValidate) {
  EXPECT_THROW(parse_calibration("qubit 0 t1 1 t2 1 ro01 0 ro10 0\n"), ParseError);
  EXPECT_THROW(parse_calibration("device d\nqubit 0 t1 10 t2 25 ro01 0 ro10 0\n"),
               ParseError);
  EXPECT_THROW(parse_calibration("device d\nqubit 0 t1 10 t2 5 ro01 1.5 ro10 0\n"),
               ParseError);
  EXPECT_THROW(parse_calibration("device d\nqubit 0 t1 10 t2 5 ro01 0 ro10 0\n"
                                 "gate cx 0 1 error 0.01 duration 300\n"),
               ParseError);
  EXPECT_THROW(parse_calibration("device d\nqubit 0 t1 10 t2 5 ro01 0 ro10 0\n"
                                 "gate h 0 error 0.01\n"),
               ParseError);
  const auto cal = load_cal("vigo-like");
  EXPECT_EQ(cal.name, "vigo-like");
  EXPECT_EQ(cal.qubits.size(), 4U);
}

TEST(NoiseModel, ZeroCalibrationIsIdentity) {
  const auto m = build_noise_model(load_cal("zero"));
  for (const auto& [kind, qubits] : m.keys()) {
    const auto ch = m.combined_channel(kind, qubits);
    EXPECT_NEAR(ch.average_infidelity(), 0.0, 1e-12);
  }
  EXPECT_TRUE(m.warnings().empty());
}

TEST(NoiseModel, DepolarizingOnlyStrengthIsTwiceError) {
  const double e = 0.004;
  const auto cal = parse_calibration("device d\nqubit 0 t1 inf t2 inf ro01 0 ro10 0\n"
                                     "gate ry 0 error " + std::to_string(e) +
                                     " duration 0\n");
  const auto m = build_noise_model(cal);
  const std::vector<int> q0 = {0};
  EXPECT_NEAR(m.gate_noise(GateKind::RY, q0).depolarizing_strength, 2.0 * e, 1e-12);
  const auto ch = m.combined_channel(GateKind::RY, q0);
  EXPECT_NEAR(monte_carlo_infidelity(ch, 40000, 6), e, 2e-4);
}

TEST(NoiseModel, BuiltChannelsMatchCalibratedInfidelity) {
  for (const char* name : kCalibrations) {
    const auto cal = load_cal(name);
    const auto m = build_noise_model(cal);
    for (const auto& g : cal.gates) {
      const auto ch = m.combined_channel(g.kind, g.qubits);
      expect_cptp(ch, name);
      if (m.gate_noise(g.kind, g.qubits).depolarizing_strength > 0.0) {
        EXPECT_NEAR(ch.average_infidelity(), g.error, 1e-9) << name;
      }
    }
  }
}

TEST(NoiseModel, MonteCarloAgreesWithClosedForm) {
  const auto cal = load_cal("melbourne-like");
  const auto m = build_noise_model(cal);
  const std::vector<int> q01 = {0, 1};
  const auto ch = m.combined_channel(GateKind::CX, q01);
  EXPECT_NEAR(monte_carlo_infidelity(ch, 20000, 7), ch.average_infidelity(), 2e-3);
}

TEST(NoiseModel, ChannelOutputsStayPhysical) {
  std::mt19937_64 rng(10);
  for (const char* name : kCalibrations) {
    const auto m = build_noise_model(load_cal(name));
    for (const auto& [kind, qubits] : m.keys()) {
      const auto ch = m.combined_channel(kind, qubits);
      const CMatrix rho = oracle::random_density(ch.arity(), rng);
      const CMatrix out = apply_channel(ch, rho);
      EXPECT_NEAR(std::abs(out.trace() - 1.0), 0.0, 1e-9);
      EXPECT_NEAR((out - out.adjoint()).norm(), 0.0, 1e-9);
      const Eigen::SelfAdjointEigenSolver<CMatrix> es(out);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
  }
}

TEST(NoiseModel, TransferMatchesStepByStepKraus) {
  std::mt19937_64 rng(12);
  for (const char* name : kCalibrations) {
    const auto m = build_noise_model(load_cal(name));
    for (const auto& [kind, qubits] : m.keys()) {
      const auto& gn = m.gate_noise(kind, qubits);
      const auto rho = DensityMatrix::from_matrix(oracle::random_density(4, rng));
      CMatrix want = rho.matrix();
      for (const auto& step : gn.steps) want = oracle::embed_channel(step.channel.operators(),
                                                                     step.qubits, 4, want);
      const CMatrix got = gn.transfer.size() > 0
                              ? apply_transfer(rho, gn.transfer, gn.qubits).matrix()
                              : rho.matrix();
      EXPECT_NEAR((got - want).norm(), 0.0, 1e-12) << name;
    }
  }
}

TEST(NoiseModel, ScalingErrorsNeverImproves) {
  for (const char* name : kCalibrations) {
    const auto cal = load_cal(name);
    const auto base = build_noise_model(cal);
    const auto worse = build_noise_model(cal.with_scaled_gate_errors(2.0));
    for (const auto& g : cal.gates) {
      EXPECT_GE(worse.combined_channel(g.kind, g.qubits).average_infidelity() + 1e-12,
                base.combined_channel(g.kind, g.qubits).average_infidelity())
          << name;
    }
  }
}

TEST(NoiseModel, MissingEntryAndClamping) {
  const auto m = build_noise_model(parse_calibration(
      "device d\nqubit 0 t1 1 t2 1 ro01 0 ro10 0\nqubit 1 t1 1 t2 1 ro01 0 ro10 0\n"
      "gate h 0 error 0.9 duration 0\n"
      "gate x 0 error 0 duration 500\n"));
  const std::vector<int> q01 = {0, 1};
  EXPECT_THROW(m.gate_noise(GateKind::CX, q01), MissingNoiseEntry);
  EXPECT_EQ(m.warnings().size(), 2U);  // unreachable h error, relaxation over x error
}

TEST(NoiseModel, CZLookupIsOrderFree) {
  const auto m = build_noise_model(load_cal("vigo-like"));
  const std::vector<int> a = {3, 0}, b = {0, 3};
  EXPECT_TRUE(m.covers(GateKind::CZ, a));
  EXPECT_TRUE(m.covers(GateKind::CZ, b));
  EXPECT_FALSE(m.covers(GateKind::CX, a));
}
