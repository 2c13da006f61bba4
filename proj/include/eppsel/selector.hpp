#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eppsel/noise.hpp"
#include "eppsel/protocols.hpp"

namespace eppsel {

struct SelectionRequest {
  double f_in = 0.0;
  double tau = 0.0;  // seconds per generation cycle
  int throughput_n = 1;
  int buffer_size = 4;  // qubits available for purification, both nodes
  DeviceConfig config;
  double t_qos = 0.0;  // seconds
  double f_out_target = 0.0;

  EPSource source() const { return {tau, throughput_n}; }
};

// Throws DomainError on out-of-range fields.
void validate(const SelectionRequest& request);

// Which family the F_b comparison favors.
//   Inverted: f_in > f_b puts EXPEDIENT first, otherwise DEJMPS first.
//   Literal:  f_in > f_b puts DEJMPS first, otherwise EXPEDIENT first.
enum class SortPolarity { Inverted, Literal };

// Scope of the EXPEDIENT pruning rule.
//   AnyError:  any error rate above v3.
//   NonIdling: any rate other than idling above v3.
enum class V3Mode { AnyError, NonIdling };

struct Thresholds {
  double v1 = 1e-4;
  double v2 = 1e-4;
  double v3 = 0.01;
  double f_b = 0.58;
  SortPolarity polarity = SortPolarity::Inverted;
  V3Mode v3_mode = V3Mode::AnyError;
};

void validate(const Thresholds& th);

struct StepRecord {
  ProtocolSpec protocol;
  double f_before = 0.0;
  double f_after = 0.0;
  double duration = 0.0;
  double success_prob = 0.0;
};

struct SelectionResult {
  std::vector<ProtocolSpec> p_out;
  double f_final = 0.0;
  double time_used = 0.0;
  std::vector<StepRecord> trace;
  // Why the loop ended: "target reached", "no improvement", "budget exhausted",
  // "input not realizable", "no qualifying protocol".
  std::string reason;
};

inline constexpr const char* kNoQualifyingProtocol = "no qualifying protocol";

// Qubits 0 .. min(buffer, device) - 1.
std::vector<int> buffer_qubits(const SelectionRequest& request);

// Drops specs that need more qubits than the buffer or the device offers, or
// whose schedule does not fit in `budget` seconds.
std::vector<ProtocolSpec> prune_by_capacity(const std::vector<ProtocolSpec>& catalog,
                                            const SelectionRequest& request, double budget);
std::vector<ProtocolSpec> prune_by_noise(const std::vector<ProtocolSpec>& catalog,
                                         const ErrorRates& rates, const Thresholds& th);
// Favored family first, then fewer rounds, fewer qubits, catalog order.
std::vector<ProtocolSpec> sort_candidates(const std::vector<ProtocolSpec>& catalog, double f_in,
                                          const Thresholds& th);

SelectionResult select(const SelectionRequest& request, const Thresholds& th,
                       const NoiseModel& noise);

nlohmann::json to_json(const SelectionRequest& request);
SelectionRequest request_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SelectionResult& result);
// Human-readable multi-line trace.
std::string describe(const SelectionResult& result, double f_in);

}  // namespace eppsel
