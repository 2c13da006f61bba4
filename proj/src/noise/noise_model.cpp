#include <algorithm>
#include <cmath>
#include <set>

#include "eppsel/errors.hpp"
#include "eppsel/noise.hpp"

namespace eppsel {

namespace {

const char* const kSingleQubitGates[] = {"rz", "sx", "x", "reset"};

}  // namespace

double residual_depolarizing(double thermal_fpro, int dim, double gate_error) {
  const double d = dim;
  const double thermal_error = 1.0 - (d * thermal_fpro + 1.0) / (d + 1.0);
  if (thermal_error >= gate_error) return 0.0;
  // With D_p = (1 - p) id + p * (full depolarizer), F_pro is affine in p:
  // F_pro(D_p o E) = (1 - p) F_pro(E) + p / d^2.
  const double target_fpro = ((d + 1.0) * (1.0 - gate_error) - 1.0) / d;
  const double p = (thermal_fpro - target_fpro) / (thermal_fpro - 1.0 / (d * d));
  return std::clamp(p, 0.0, 1.0);
}

NoiseModel NoiseModel::noiseless() {
  NoiseModel m;
  m.noiseless_ = true;
  m.ideal_1q_.thermal = {QuantumChannel::identity(1)};
  m.ideal_2q_.thermal = {QuantumChannel::identity(1), QuantumChannel::identity(1)};
  return m;
}

NoiseModel build_noise_model(const DeviceConfig& config) {
  validate(config);
  NoiseModel m;
  m.config_ = config;
  m.ideal_1q_.thermal = {QuantumChannel::identity(1)};
  m.ideal_2q_.thermal = {QuantumChannel::identity(1), QuantumChannel::identity(1)};

  std::set<std::string> names(std::begin(kSingleQubitGates), std::end(kSingleQubitGates));
  for (const GateProperties& g : config.gates) {
    if (g.qubits.size() == 1) names.insert(g.name);
  }
  const int n = config.num_qubits();
  for (const std::string& name : names) {
    for (int q = 0; q < n; ++q) {
      const GateProperties g = config.gate(name, {q});
      const QubitProperties& qp = config.qubits[q];
      GateNoise gn;
      gn.length = g.gate_length;
      QuantumChannel th = thermal_relaxation_channel(g.gate_length, qp.t1, qp.t2);
      const double fpro = process_fidelity(th);
      gn.thermal_error = 1.0 - (2.0 * fpro + 1.0) / 3.0;
      gn.depolarizing_p = name == "reset" ? 0.0 : residual_depolarizing(fpro, 2, g.gate_error);
      gn.thermal = {std::move(th)};
      m.single_.emplace(std::make_pair(name, q), std::move(gn));
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const GateProperties g = config.gate("cx", {a, b});
      GateNoise gn;
      gn.length = g.gate_length;
      QuantumChannel ta = thermal_relaxation_channel(g.gate_length, config.qubits[a].t1,
                                                     config.qubits[a].t2);
      QuantumChannel tb = thermal_relaxation_channel(g.gate_length, config.qubits[b].t1,
                                                     config.qubits[b].t2);
      const double fpro = process_fidelity(ta) * process_fidelity(tb);
      gn.thermal_error = 1.0 - (4.0 * fpro + 1.0) / 5.0;
      gn.depolarizing_p = residual_depolarizing(fpro, 4, g.gate_error);
      gn.thermal = {std::move(ta), std::move(tb)};
      m.cx_.emplace(std::make_pair(a, b), std::move(gn));
    }
  }
  return m;
}

const GateNoise& NoiseModel::single_qubit(const std::string& name, int qubit) const {
  if (noiseless_) return ideal_1q_;
  auto it = single_.find({name, qubit});
  if (it == single_.end()) {
    throw IndexError("no noise entry for gate '" + name + "' on qubit " + std::to_string(qubit));
  }
  return it->second;
}

const GateNoise& NoiseModel::cx(int control, int target) const {
  if (noiseless_) return ideal_2q_;
  auto it = cx_.find({control, target});
  if (it == cx_.end()) {
    throw IndexError("no cx noise entry for qubits " + std::to_string(control) + "," +
                     std::to_string(target));
  }
  return it->second;
}

QuantumChannel NoiseModel::idle(int qubit, double t) const {
  if (noiseless_ || t <= 0.0) return QuantumChannel::identity(1);
  const QubitProperties& q = config_.qubits.at(qubit);
  return thermal_relaxation_channel(t, q.t1, q.t2);
}

Confusion NoiseModel::confusion(int qubit) const {
  if (noiseless_) return {};
  const QubitProperties& q = config_.qubits.at(qubit);
  return {q.prob_meas1_prep0, q.prob_meas0_prep1};
}

double NoiseModel::reset_error(int qubit) const {
  if (noiseless_) return 0.0;
  return config_.gate("reset", {qubit}).gate_error;
}

double NoiseModel::reset_length(int qubit) const {
  if (noiseless_) return 0.0;
  return config_.gate("reset", {qubit}).gate_length;
}

double NoiseModel::readout_length(int qubit) const {
  if (noiseless_) return 0.0;
  return config_.qubits.at(qubit).readout_length;
}

ErrorRates estimate_error_rates(const DeviceConfig& config, const EPSource& source,
                                const std::vector<int>& protocol_qubits) {
  if (protocol_qubits.empty()) throw DomainError("error rates need at least one qubit");
  for (int q : protocol_qubits) {
    if (q < 0 || q >= config.num_qubits()) {
      throw IndexError("protocol qubit " + std::to_string(q) + " not on the device");
    }
  }
  ErrorRates r;
  // Two-qubit entangling gates used by purification are intra-node: both
  // operands share parity.
  int gates = 0;
  for (int a : protocol_qubits) {
    for (int b : protocol_qubits) {
      if (a == b || (a - b) % 2 != 0) continue;
      const GateProperties g = config.gate("cx", {a, b});
      const QubitProperties& qa = config.qubits[a];
      const QubitProperties& qb = config.qubits[b];
      const double fpro =
          process_fidelity(thermal_relaxation_channel(g.gate_length, qa.t1, qa.t2)) *
          process_fidelity(thermal_relaxation_channel(g.gate_length, qb.t1, qb.t2));
      r.e_depolarizing += residual_depolarizing(fpro, 4, g.gate_error);
      r.e_amplitude_damping += 0.5 * (lambda_amplitude(g.gate_length, qa.t1) +
                                      lambda_amplitude(g.gate_length, qb.t1));
      r.e_phase_damping += 0.5 * (lambda_phase(g.gate_length, qa.t1, qa.t2) +
                                  lambda_phase(g.gate_length, qb.t1, qb.t2));
      ++gates;
    }
  }
  if (gates > 0) {
    r.e_depolarizing /= gates;
    r.e_amplitude_damping /= gates;
    r.e_phase_damping /= gates;
  }
  // Mean wait of the buffered EPs: EP k arrives at ceil(k/n)*tau and waits
  // for the last one.
  const int demand = std::max<int>(1, static_cast<int>(protocol_qubits.size()) / 2);
  const int n = std::max(1, source.throughput_n);
  const int last_cycle = (demand + n - 1) / n;
  double mean_wait = 0.0;
  for (int k = 1; k <= demand; ++k) mean_wait += (last_cycle - (k + n - 1) / n) * source.tau;
  mean_wait /= demand;
  for (int q : protocol_qubits) {
    const QubitProperties& qp = config.qubits[q];
    r.e_measurement += 0.5 * (qp.prob_meas0_prep1 + qp.prob_meas1_prep0);
    if (mean_wait > 0.0) {
      r.e_idling += gate_error_rate(thermal_relaxation_channel(mean_wait, qp.t1, qp.t2));
    }
  }
  r.e_measurement /= protocol_qubits.size();
  r.e_idling /= protocol_qubits.size();
  return r;
}

}  // namespace eppsel
