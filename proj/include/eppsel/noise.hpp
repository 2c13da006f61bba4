#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "eppsel/densmat.hpp"

namespace eppsel {

// ---- channel constructors -------------------------------------------------

double lambda_amplitude(double t, double t1);
// T1*T2 / (2*T1 - T2); +infinity when T2 == 2*T1.
double dephasing_time(double t1, double t2);
double lambda_phase(double t, double t1, double t2);

QuantumChannel depolarizing_channel(double p);
// 16 Pauli products; identity weight 1 - 15p/16, others p/16.
QuantumChannel two_qubit_depolarizing_channel(double p);
QuantumChannel amplitude_damping_channel(double lambda);
QuantumChannel phase_damping_channel(double lambda);
// Amplitude damping followed by phase damping.
QuantumChannel thermal_relaxation_channel(double t, double t1, double t2);
QuantumChannel reset_channel(double p);

// sum_k |tr E_k|^2 / d^2
double process_fidelity(const QuantumChannel& channel);
// 1 - (d F_pro + 1) / (d + 1)
double gate_error_rate(const QuantumChannel& channel);

// ---- device configuration -------------------------------------------------

struct QubitProperties {
  double t1 = 0.0;
  double t2 = 0.0;
  double readout_length = 0.0;
  double prob_meas0_prep1 = 0.0;
  double prob_meas1_prep0 = 0.0;

  bool operator==(const QubitProperties&) const = default;
};

struct GateProperties {
  std::string name;  // "cx", "sx", "x", "rz", "reset", ...
  std::vector<int> qubits;
  double gate_error = 0.0;
  double gate_length = 0.0;

  bool operator==(const GateProperties&) const = default;
};

struct DeviceConfig {
  std::string name;
  std::vector<QubitProperties> qubits;
  std::vector<GateProperties> gates;
  std::vector<std::pair<int, int>> coupling_map;

  int num_qubits() const { return static_cast<int>(qubits.size()); }
  // Exact entry, then the reversed qubit order, then the mean over entries of
  // the same name (all-to-all fallback); zero error and length if none.
  GateProperties gate(const std::string& name, const std::vector<int>& qubits) const;

  bool operator==(const DeviceConfig&) const = default;
};

// Throws SchemaError naming a missing or malformed field and
// PhysicalityError naming a qubit with T2 > 2*T1. Unknown keys are reported
// through `warnings` when given.
DeviceConfig load_device_config(const nlohmann::json& doc,
                                std::vector<std::string>* warnings = nullptr);
DeviceConfig load_device_config_file(const std::filesystem::path& path,
                                     std::vector<std::string>* warnings = nullptr);
nlohmann::json to_json(const DeviceConfig& config);
void validate(const DeviceConfig& config);

// ---- noise model ----------------------------------------------------------

struct GateNoise {
  std::vector<QuantumChannel> thermal;  // one per operand qubit
  double thermal_error = 0.0;           // error rate of the thermal part
  double depolarizing_p = 0.0;          // residual, 0 when skipped
  double length = 0.0;
};

class NoiseModel {
 public:
  // All operations exact and instantaneous; raw pairs are supplied as
  // explicit states (oracle mode).
  static NoiseModel noiseless();

  bool is_noiseless() const { return noiseless_; }
  const DeviceConfig& config() const { return config_; }

  const GateNoise& single_qubit(const std::string& name, int qubit) const;
  const GateNoise& cx(int control, int target) const;
  QuantumChannel idle(int qubit, double t) const;
  Confusion confusion(int qubit) const;
  double reset_error(int qubit) const;
  double reset_length(int qubit) const;
  double readout_length(int qubit) const;
  int num_qubits() const { return config_.num_qubits(); }

 private:
  friend NoiseModel build_noise_model(const DeviceConfig& config);
  NoiseModel() = default;

  bool noiseless_ = false;
  DeviceConfig config_;
  std::map<std::pair<std::string, int>, GateNoise> single_;
  std::map<std::pair<int, int>, GateNoise> cx_;
  GateNoise ideal_1q_;
  GateNoise ideal_2q_;
};

NoiseModel build_noise_model(const DeviceConfig& config);

// Residual depolarizing probability making the composite error rate equal
// `gate_error`; 0 when the thermal part already reaches it.
double residual_depolarizing(double thermal_process_fidelity, int dim, double gate_error);

struct ErrorRates {
  double e_depolarizing = 0.0;
  double e_amplitude_damping = 0.0;
  double e_phase_damping = 0.0;
  double e_measurement = 0.0;
  double e_idling = 0.0;
};

struct EPSource {
  double tau = 0.0;      // seconds per generation cycle
  int throughput_n = 1;  // EPs per cycle
};

ErrorRates estimate_error_rates(const DeviceConfig& config, const EPSource& source,
                                const std::vector<int>& protocol_qubits);

}  // namespace eppsel
