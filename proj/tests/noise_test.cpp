#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "eppsel/errors.hpp"
#include "eppsel/noise.hpp"
#include "test_util.hpp"

namespace eppsel {
namespace {

using nlohmann::json;
using testing::max_abs_diff;
using testing::random_density;

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

DensityMatrix apply1(const QuantumChannel& c, const DensityMatrix& rho) {
  const int t[1] = {0};
  return apply_channel(rho, c, t);
}

// Action on the four matrix units |i><j|, compared entrywise.
double superoperator_distance(const QuantumChannel& a, const QuantumChannel& b) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix unit = Matrix::Zero(2, 2);
      unit(i, j) = 1.0;
      Matrix ra = Matrix::Zero(2, 2), rb = Matrix::Zero(2, 2);
      for (const Matrix& e : a.kraus_ops()) ra += e * unit * e.adjoint();
      for (const Matrix& e : b.kraus_ops()) rb += e * unit * e.adjoint();
      worst = std::max(worst, max_abs_diff(ra, rb));
    }
  }
  return worst;
}

TEST(Lambda, AmplitudeValues) {
  EXPECT_EQ(lambda_amplitude(0.0, 1e-4), 0.0);
  EXPECT_NEAR(lambda_amplitude(1e-4, 1e-4), 0.63212056, 1e-8);
  double prev = 0.0;
  for (double t = 1e-6; t < 2e-3; t *= 3) {
    const double l = lambda_amplitude(t, 1e-4);
    EXPECT_GT(l, prev);
    EXPECT_LT(l, 1.0);
    prev = l;
  }
  EXPECT_THROW(lambda_amplitude(1.0, 0.0), DomainError);
}

TEST(Lambda, DephasingTime) {
  EXPECT_NEAR(dephasing_time(1e-4, 1e-4), 1e-4, 1e-16);
  EXPECT_TRUE(std::isinf(dephasing_time(1e-4, 2e-4)));
  EXPECT_THROW(dephasing_time(1e-4, 2.5e-4), PhysicalityError);
}

TEST(Lambda, PhaseValues) {
  EXPECT_EQ(lambda_phase(0.0, 1e-4, 1e-4), 0.0);
  EXPECT_EQ(lambda_phase(5e-5, 1e-4, 2e-4), 0.0);
  const double tphi = 1e-4 * 1.5e-4 / (2e-4 - 1.5e-4);
  EXPECT_NEAR(lambda_phase(tphi, 1e-4, 1.5e-4), 0.63212056, 1e-8);
  double prev = 0.0;
  for (double t = 1e-9; t < 1e-4; t *= 4) {
    const double l = lambda_phase(t, 1e-4, 5e-5);
    EXPECT_GT(l, prev);
    prev = l;
  }
}

TEST(Channels, Depolarizing) {
  const DensityMatrix zero(diag2(1, 0));
  for (double p : {0.0, 0.1, 0.37, 1.0}) {
    EXPECT_LT(max_abs_diff(apply1(depolarizing_channel(p), zero).data(), diag2(1 - p / 2, p / 2)),
              1e-15);
  }
  const DensityMatrix mixed(diag2(0.5, 0.5));
  EXPECT_LT(max_abs_diff(apply1(depolarizing_channel(0.6), mixed).data(), mixed.data()), 1e-15);
  EXPECT_LT(superoperator_distance(depolarizing_channel(0.0), QuantumChannel::identity(1)), 1e-15);
  EXPECT_LT(depolarizing_channel(0.37).completeness_defect(), 1e-12);
  EXPECT_THROW(depolarizing_channel(1.2), DomainError);
}

TEST(Channels, TwoQubitDepolarizingIsConvexMixture) {
  // p = 1 sends everything to I/4.
  std::mt19937_64 rng(1);
  const DensityMatrix rho = random_density(2, rng);
  const int t[2] = {0, 1};
  EXPECT_LT(max_abs_diff(apply_channel(rho, two_qubit_depolarizing_channel(1.0), t).data(),
                         Matrix::Identity(4, 4) / 4.0),
            1e-14);
  const double p = 0.3;
  const Matrix expect = (1 - p) * rho.data() + p * Matrix::Identity(4, 4) / 4.0;
  EXPECT_LT(max_abs_diff(apply_channel(rho, two_qubit_depolarizing_channel(p), t).data(), expect),
            1e-14);
}

TEST(Channels, AmplitudeDamping) {
  const DensityMatrix one(diag2(0, 1));
  EXPECT_LT(max_abs_diff(apply1(amplitude_damping_channel(1.0), one).data(), diag2(1, 0)), 1e-15);
  EXPECT_LT(max_abs_diff(apply1(amplitude_damping_channel(0.5), one).data(), diag2(0.5, 0.5)),
            1e-15);
  EXPECT_LT(superoperator_distance(amplitude_damping_channel(0.0), QuantumChannel::identity(1)),
            1e-15);
}

TEST(Channels, PhaseDamping) {
  const DensityMatrix d(diag2(0.3, 0.7));
  EXPECT_LT(max_abs_diff(apply1(phase_damping_channel(0.8), d).data(), d.data()), 1e-15);
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  const DensityMatrix out = apply1(phase_damping_channel(0.4), DensityMatrix(plus));
  EXPECT_NEAR(out.data()(0, 1).real(), 0.5 * 0.6, 1e-15);
  EXPECT_LT(superoperator_distance(phase_damping_channel(0.0), QuantumChannel::identity(1)), 1e-15);
}

TEST(Channels, Thermal) {
  EXPECT_LT(superoperator_distance(thermal_relaxation_channel(0.0, 1e-4, 1e-4),
                                   QuantumChannel::identity(1)),
            1e-15);
  for (double t : {1e-7, 3e-6, 2e-4}) {
    EXPECT_LT(superoperator_distance(thermal_relaxation_channel(t, 1e-4, 2e-4),
                                     amplitude_damping_channel(lambda_amplitude(t, 1e-4))),
              1e-12);
  }
  // T1 >> T2: dephasing dominated.
  EXPECT_NEAR(lambda_amplitude(1e-7, 1e-3), 1e-4, 1e-7);
  const double lp = lambda_phase(1e-7, 1e-3, 1e-6);
  EXPECT_NEAR(lp, 1.0 - std::exp(-1e-7 * (2e-3 - 1e-6) / (1e-3 * 1e-6)), 1e-14);
  EXPECT_NEAR(lp, 0.18118, 1e-4);
  // Coherence decays by sqrt(1 - la) * (1 - lp).
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  const DensityMatrix out =
      apply1(thermal_relaxation_channel(1e-7, 1e-3, 1e-6), DensityMatrix(plus));
  EXPECT_NEAR(out.data()(0, 1).real(),
              0.5 * std::sqrt(1 - lambda_amplitude(1e-7, 1e-3)) * (1 - lp), 1e-14);
}

TEST(Channels, Reset) {
  const DensityMatrix mixed(diag2(0.5, 0.5));
  EXPECT_LT(max_abs_diff(apply1(reset_channel(0.0), mixed).data(), diag2(1, 0)), 1e-15);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    EXPECT_LT(max_abs_diff(apply1(reset_channel(0.3), random_density(1, rng)).data(),
                           diag2(0.7, 0.3)),
              1e-15);
  }
  EXPECT_LT(reset_channel(0.3).completeness_defect(), 1e-12);
}

TEST(Channels, CompletenessAndTracePreservationSuite) {
  std::vector<QuantumChannel> ones = {
      depolarizing_channel(0.0),          depolarizing_channel(0.37),
      depolarizing_channel(1.0),          amplitude_damping_channel(0.2),
      amplitude_damping_channel(1.0),     phase_damping_channel(0.5),
      phase_damping_channel(1.0),         thermal_relaxation_channel(1e-6, 1e-5, 7e-6),
      thermal_relaxation_channel(1e-7, 1e-3, 1e-6), reset_channel(0.1)};
  std::vector<QuantumChannel> twos = {two_qubit_depolarizing_channel(0.05),
                                      two_qubit_depolarizing_channel(1.0),
                                      werner_twirl_channel()};
  for (const auto& c : ones) EXPECT_LT(c.completeness_defect(), 1e-12);
  for (const auto& c : twos) EXPECT_LT(c.completeness_defect(), 1e-12);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix r1 = random_density(1, rng);
    const DensityMatrix r2 = random_density(2, rng);
    const QuantumChannel& c1 = ones[i % ones.size()];
    const QuantumChannel& c2 = twos[i % twos.size()];
    EXPECT_LT(std::abs(apply1(c1, r1).trace_weight() - r1.trace_weight()), 1e-12);
    const int t[2] = {1, 0};
    EXPECT_LT(std::abs(apply_channel(r2, c2, t).trace_weight() - r2.trace_weight()), 1e-12);
  }
}

TEST(ErrorRate, KnownValues) {
  // Average infidelity of single-qubit depolarizing(p) is p/2.
  EXPECT_NEAR(gate_error_rate(depolarizing_channel(0.1)), 0.05, 1e-15);
  // Two-qubit depolarizing(p) has F_pro = 1 - 15p/16.
  const double p = 0.02;
  const double fpro = 1.0 - 15.0 * p / 16.0;
  EXPECT_NEAR(gate_error_rate(two_qubit_depolarizing_channel(p)), 1 - (4 * fpro + 1) / 5, 1e-15);
  EXPECT_NEAR(gate_error_rate(QuantumChannel::identity(2)), 0.0, 1e-15);
}

json uniform_device(int n, double t1, double t2, double cx_err, double cx_len) {
  json doc;
  doc["name"] = "uniform";
  doc["qubits"] = json::array();
  for (int q = 0; q < n; ++q) {
    doc["qubits"].push_back({{"t1", t1},
                             {"t2", t2},
                             {"readout_length", 1e-6},
                             {"prob_meas0_prep1", 0.02},
                             {"prob_meas1_prep0", 0.01}});
  }
  doc["gates"] = json::array();
  for (int a = 0; a < n; ++a) {
    doc["gates"].push_back({{"name", "sx"}, {"qubits", {a}}, {"gate_error", 3e-4},
                            {"gate_length", 3.5e-8}});
    for (int b = 0; b < n; ++b) {
      if (a != b) {
        doc["gates"].push_back({{"name", "cx"}, {"qubits", {a, b}}, {"gate_error", cx_err},
                                {"gate_length", cx_len}});
      }
    }
  }
  doc["coupling_map"] = json::array();
  return doc;
}

TEST(DeviceConfig, RoundTrip) {
  const DeviceConfig c = load_device_config(uniform_device(4, 1e-4, 8e-5, 1e-2, 4e-7));
  EXPECT_EQ(c.num_qubits(), 4);
  const DeviceConfig again = load_device_config(to_json(c));
  EXPECT_EQ(c, again);
  const DeviceConfig third = load_device_config(json::parse(to_json(again).dump()));
  EXPECT_EQ(c, third);
}

TEST(DeviceConfig, SchemaErrorsNameTheField) {
  json doc = uniform_device(2, 1e-4, 8e-5, 1e-2, 4e-7);
  doc["qubits"][1].erase("t1");
  try {
    load_device_config(doc);
    FAIL() << "expected schema error";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("t1"), std::string::npos);
  }
  json no_gates = uniform_device(2, 1e-4, 8e-5, 1e-2, 4e-7);
  no_gates.erase("gates");
  EXPECT_THROW(load_device_config(no_gates), SchemaError);
}

TEST(DeviceConfig, PhysicalityErrorNamesQubit) {
  json doc = uniform_device(3, 1e-4, 8e-5, 1e-2, 4e-7);
  doc["qubits"][2]["t2"] = 2.5e-4;
  try {
    load_device_config(doc);
    FAIL() << "expected physicality error";
  } catch (const PhysicalityError& e) {
    EXPECT_NE(std::string(e.what()).find("qubit 2"), std::string::npos);
  }
}

TEST(DeviceConfig, UnknownKeysWarn) {
  json doc = uniform_device(2, 1e-4, 8e-5, 1e-2, 4e-7);
  doc["vendor_notes"] = "x";
  doc["qubits"][0]["frequency"] = 5e9;
  std::vector<std::string> warnings;
  load_device_config(doc, &warnings);
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_NE(warnings[0].find("vendor_notes"), std::string::npos);
  EXPECT_NE(warnings[1].find("frequency"), std::string::npos);
}

TEST(DeviceConfig, GateLookupFallbacks) {
  json doc = uniform_device(3, 1e-4, 8e-5, 1e-2, 4e-7);
  doc["gates"] = json::array({{{"name", "cx"}, {"qubits", {0, 1}}, {"gate_error", 0.01},
                               {"gate_length", 3e-7}},
                              {{"name", "cx"}, {"qubits", {1, 2}}, {"gate_error", 0.03},
                               {"gate_length", 5e-7}}});
  const DeviceConfig c = load_device_config(doc);
  EXPECT_DOUBLE_EQ(c.gate("cx", {1, 0}).gate_error, 0.01);
  EXPECT_DOUBLE_EQ(c.gate("cx", {0, 2}).gate_error, 0.02);
  EXPECT_DOUBLE_EQ(c.gate("cx", {0, 2}).gate_length, 4e-7);
  EXPECT_DOUBLE_EQ(c.gate("sx", {0}).gate_error, 0.0);
}

TEST(NoiseModel, CompositeErrorMatchesCalibration) {
  const DeviceConfig c = load_device_config(uniform_device(4, 1e-4, 8e-5, 1e-2, 4e-7));
  const NoiseModel m = build_noise_model(c);
  const GateNoise& g = m.cx(0, 2);
  ASSERT_EQ(g.thermal.size(), 2u);
  EXPECT_GT(g.depolarizing_p, 0.0);
  const QuantumChannel composite =
      g.thermal[0].kron(g.thermal[1]).then(two_qubit_depolarizing_channel(g.depolarizing_p));
  EXPECT_NEAR(gate_error_rate(composite), 0.01, 1e-9);
  const GateNoise& s = m.single_qubit("sx", 1);
  const QuantumChannel s_comp = s.thermal[0].then(depolarizing_channel(s.depolarizing_p));
  EXPECT_NEAR(gate_error_rate(s_comp), 3e-4, 1e-9);
}

TEST(NoiseModel, DecompositionEdgeCases) {
  // Zero calibrated error: thermal only.
  const NoiseModel a = build_noise_model(load_device_config(uniform_device(2, 1e-4, 8e-5, 0.0, 4e-7)));
  EXPECT_EQ(a.cx(0, 1).depolarizing_p, 0.0);
  // Zero length: pure depolarizing with error rate equal to gate_err.
  const NoiseModel b = build_noise_model(load_device_config(uniform_device(2, 1e-4, 8e-5, 0.02, 0.0)));
  EXPECT_NEAR(gate_error_rate(two_qubit_depolarizing_channel(b.cx(0, 1).depolarizing_p)), 0.02,
              1e-12);
  EXPECT_NEAR(b.cx(0, 1).thermal_error, 0.0, 1e-15);
  // Thermal error above calibration: depolarizing skipped.
  const NoiseModel c = build_noise_model(load_device_config(uniform_device(2, 1e-6, 1e-6, 1e-3, 5e-7)));
  EXPECT_GT(c.cx(0, 1).thermal_error, 1e-3);
  EXPECT_EQ(c.cx(0, 1).depolarizing_p, 0.0);
}

TEST(NoiseModel, ReadoutConfusion) {
  const NoiseModel m = build_noise_model(load_device_config(uniform_device(2, 1e-4, 8e-5, 0.0, 0.0)));
  const Confusion c = m.confusion(1);
  EXPECT_DOUBLE_EQ(c.p01, 0.01);  // prob_meas1_prep0
  EXPECT_DOUBLE_EQ(c.p10, 0.02);  // prob_meas0_prep1
  EXPECT_TRUE(NoiseModel::noiseless().is_noiseless());
}

TEST(ErrorRates, UniformDevice) {
  const DeviceConfig c = load_device_config(uniform_device(6, 1e-4, 8e-5, 1e-2, 4e-7));
  const NoiseModel m = build_noise_model(c);
  const ErrorRates r = estimate_error_rates(c, EPSource{0.0, 1}, {0, 1, 2, 3, 4, 5});
  EXPECT_NEAR(r.e_depolarizing, m.cx(0, 2).depolarizing_p, 1e-15);
  EXPECT_NEAR(r.e_amplitude_damping, lambda_amplitude(4e-7, 1e-4), 1e-15);
  EXPECT_NEAR(r.e_phase_damping, lambda_phase(4e-7, 1e-4, 8e-5), 1e-15);
  EXPECT_NEAR(r.e_measurement, 0.015, 1e-15);
  EXPECT_EQ(r.e_idling, 0.0);
  // Throughput covering the demand: no waiting even with slow cycles.
  EXPECT_EQ(estimate_error_rates(c, EPSource{5e-8, 3}, {0, 1, 2, 3, 4, 5}).e_idling, 0.0);
  EXPECT_GT(estimate_error_rates(c, EPSource{5e-8, 1}, {0, 1, 2, 3, 4, 5}).e_idling, 0.0);
  EXPECT_THROW(estimate_error_rates(c, EPSource{}, {}), DomainError);
}

}  // namespace
}  // namespace eppsel
