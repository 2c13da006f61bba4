#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eppsel/densmat.hpp"
#include "eppsel/noise.hpp"

namespace eppsel {

enum class Family { BBPSSW, DEJMPS, EXPEDIENT };

std::string family_name(Family family);

struct ProtocolSpec {
  std::string id;  // stable registry id, e.g. "dejmps-2r"
  Family family = Family::BBPSSW;
  int rounds = 1;
  bool reuse = false;
  int qubits_needed = 0;
  int ep_demand = 0;

  std::string label() const;  // e.g. "DEJMPSx2 reuse"
  bool operator==(const ProtocolSpec&) const = default;
};

// BBPSSW and DEJMPS for rounds 1..3 (reuse variants for rounds >= 2), then
// EXPEDIENT for rounds 1..2. Order is stable and used for tie-breaking.
const std::vector<ProtocolSpec>& protocol_registry();
// Throws DomainError for an unknown id.
const ProtocolSpec& find_protocol(std::string_view id);
nlohmann::json catalog_json();

struct TimedCircuit {
  int num_qubits = 0;
  std::vector<GateOp> ops;  // ordered by start_time
  std::vector<std::pair<int, int>> measured_pairs;
  std::pair<int, int> kept_pair{0, 1};
  // Qubits holding raw EP k (0-based, in consumption order).
  std::vector<std::pair<int, int>> ep_slots;
  double total_duration = 0.0;

  // One op per line: start time, kind, targets, parameter.
  std::string listing() const;
};

// Two-qubit fragment preparing |phi+> on (a, b) from |00>: H on a as
// RZ(pi/2) SX RZ(pi/2), CNOT a->b, then Delay(delay_t) on both qubits.
// Durations come from `config` (zero when null).
TimedCircuit build_ep_generation(double delay_t, const DeviceConfig* config = nullptr,
                                 std::pair<int, int> qubits = {0, 1});

// Even qubits belong to node A, odd to node B; slot s holds qubits
// (2s, 2s+1) and the kept pair is slot 0. The transport delay tuning the raw
// fidelity is not counted in the schedule. Throws ConstructionError when the
// device has fewer qubits than the circuit needs.
TimedCircuit build_protocol_circuit(const ProtocolSpec& spec, const EPSource& source,
                                    double input_delay, const DeviceConfig* config = nullptr);

// Critical path of the protocol circuit including the final readout.
double estimate_duration(const ProtocolSpec& spec, const DeviceConfig& config,
                         const EPSource& source);

// Raw pair on qubits (0, 1) after generation and `delay_t` of idling.
DensityMatrix raw_pair_state(double delay_t, const NoiseModel& noise);
double raw_pair_fidelity(double delay_t, const NoiseModel& noise);

// Bisection on the delay -> fidelity map; throws RangeError when unreachable.
double calibrate_delay_for_fidelity(double f_target, const NoiseModel& noise);

struct PurifyOutcome {
  double f_out = 0.0;
  double success_prob = 0.0;
  double duration = 0.0;
};

// Executes `circuit` under `noise`. When `raw_input` is given every raw EP is
// injected as that state instead of simulating its generation fragment.
PurifyOutcome execute_circuit(const TimedCircuit& circuit, const NoiseModel& noise,
                              const DensityMatrix* raw_input = nullptr);

// Noisy models realize f_in through delay calibration; the noiseless model
// injects Werner(f_in) pairs.
PurifyOutcome run_protocol(double f_in, const ProtocolSpec& spec, const NoiseModel& noise,
                           const EPSource& source);
PurifyOutcome run_protocol_on_input(const DensityMatrix& raw, const ProtocolSpec& spec,
                                    const NoiseModel& noise, const EPSource& source);

double analytic_bbpssw(double f);
// (A^2 + B^2) / N with N = (A + B)^2 + (C + D)^2; returns {F', N}.
std::pair<double, double> analytic_dejmps(double a, double b, double c, double d);

}  // namespace eppsel
