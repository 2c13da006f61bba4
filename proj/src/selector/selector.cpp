#include "eppsel/selector.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "eppsel/errors.hpp"

namespace eppsel {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void validate(const SelectionRequest& r) {
  if (!in_unit(r.f_in)) throw DomainError("f_in must lie in [0, 1]");
  if (!in_unit(r.f_out_target)) throw DomainError("f_out_target must lie in [0, 1]");
  if (!(r.t_qos >= 0.0)) throw DomainError("t_qos must be non-negative");
  if (!(r.tau >= 0.0)) throw DomainError("tau must be non-negative");
  if (r.throughput_n < 1) throw DomainError("throughput_n must be at least 1");
  if (r.buffer_size < 4) throw DomainError("buffer_size must be at least 4");
}

void validate(const Thresholds& th) {
  if (!in_unit(th.v1) || !in_unit(th.v2) || !in_unit(th.v3) || !in_unit(th.f_b)) {
    throw DomainError("thresholds must lie in [0, 1]");
  }
}

std::vector<int> buffer_qubits(const SelectionRequest& request) {
  const int n = std::min(request.buffer_size, request.config.num_qubits());
  std::vector<int> qs(std::max(n, 0));
  for (int q = 0; q < n; ++q) qs[q] = q;
  return qs;
}

std::vector<ProtocolSpec> prune_by_capacity(const std::vector<ProtocolSpec>& catalog,
                                            const SelectionRequest& request, double budget) {
  std::vector<ProtocolSpec> out;
  const int capacity = std::min(request.buffer_size, request.config.num_qubits());
  for (const ProtocolSpec& spec : catalog) {
    if (spec.qubits_needed > capacity) continue;
    if (estimate_duration(spec, request.config, request.source()) > budget) continue;
    out.push_back(spec);
  }
  return out;
}

std::vector<ProtocolSpec> prune_by_noise(const std::vector<ProtocolSpec>& catalog,
                                         const ErrorRates& rates, const Thresholds& th) {
  const double all[] = {rates.e_depolarizing, rates.e_amplitude_damping, rates.e_phase_damping,
                        rates.e_measurement, rates.e_idling};
  const double non_idling[] = {rates.e_depolarizing, rates.e_amplitude_damping,
                               rates.e_phase_damping, rates.e_measurement};
  const bool any_above_v1 = std::any_of(std::begin(all), std::end(all),
                                        [&](double e) { return e > th.v1; });
  const bool all_below_v2 = std::all_of(std::begin(all), std::end(all),
                                        [&](double e) { return e < th.v2; });
  const bool any_above_v3 =
      th.v3_mode == V3Mode::AnyError
          ? std::any_of(std::begin(all), std::end(all), [&](double e) { return e > th.v3; })
          : std::any_of(std::begin(non_idling), std::end(non_idling),
                        [&](double e) { return e > th.v3; });
  std::vector<ProtocolSpec> out;
  for (const ProtocolSpec& spec : catalog) {
    if (any_above_v1 && spec.rounds > 2) continue;
    if (all_below_v2 && spec.family == Family::BBPSSW) continue;
    if (any_above_v3 && spec.family == Family::EXPEDIENT) continue;
    out.push_back(spec);
  }
  return out;
}

std::vector<ProtocolSpec> sort_candidates(const std::vector<ProtocolSpec>& catalog, double f_in,
                                          const Thresholds& th) {
  const bool high = f_in > th.f_b;
  const bool literal = th.polarity == SortPolarity::Literal;
  const Family favored =
      (high == literal) ? Family::DEJMPS : Family::EXPEDIENT;
  std::vector<ProtocolSpec> out = catalog;
  std::stable_sort(out.begin(), out.end(), [&](const ProtocolSpec& a, const ProtocolSpec& b) {
    const int fa = a.family == favored ? 0 : 1;
    const int fb = b.family == favored ? 0 : 1;
    if (fa != fb) return fa < fb;
    if (a.rounds != b.rounds) return a.rounds < b.rounds;
    return a.qubits_needed < b.qubits_needed;
  });
  return out;
}

SelectionResult select(const SelectionRequest& request, const Thresholds& th,
                       const NoiseModel& noise) {
  validate(request);
  validate(th);
  SelectionResult result;
  result.f_final = request.f_in;
  if (request.f_in >= request.f_out_target) {
    result.reason = "target reached";
    return result;
  }
  const ErrorRates rates = estimate_error_rates(request.config, request.source(),
                                                buffer_qubits(request));
  const std::vector<ProtocolSpec> pool = prune_by_noise(protocol_registry(), rates, th);

  double f = request.f_in;
  double remaining = request.t_qos;
  while (true) {
    if (f >= request.f_out_target) {
      result.reason = "target reached";
      break;
    }
    const std::vector<ProtocolSpec> candidates =
        sort_candidates(prune_by_capacity(pool, request, remaining), f, th);
    if (candidates.empty()) {
      result.reason = result.p_out.empty() ? kNoQualifyingProtocol : "budget exhausted";
      break;
    }
    const ProtocolSpec& spec = candidates.front();
    PurifyOutcome out;
    try {
      out = run_protocol(f, spec, noise, request.source());
    } catch (const RangeError&) {
      result.reason = "input not realizable";
      break;
    }
    if (out.f_out <= f) {
      result.reason = "no improvement";
      break;
    }
    result.trace.push_back({spec, f, out.f_out, out.duration, out.success_prob});
    result.p_out.push_back(spec);
    result.time_used += out.duration;
    remaining -= out.duration;
    f = out.f_out;
  }
  result.f_final = f;
  return result;
}

nlohmann::json to_json(const SelectionRequest& r) {
  return {{"f_in", r.f_in},
          {"tau", r.tau},
          {"throughput_n", r.throughput_n},
          {"buffer_size", r.buffer_size},
          {"t_qos", r.t_qos},
          {"f_out_target", r.f_out_target},
          {"config", to_json(r.config)}};
}

SelectionRequest request_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("request document must be an object");
  SelectionRequest r;
  auto number = [&](const char* key) {
    if (!doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    if (!doc.at(key).is_number()) {
      throw SchemaError(std::string("field '") + key + "' must be a number");
    }
    return doc.at(key).get<double>();
  };
  r.f_in = number("f_in");
  r.tau = number("tau");
  r.throughput_n = static_cast<int>(number("throughput_n"));
  r.buffer_size = static_cast<int>(number("buffer_size"));
  r.t_qos = number("t_qos");
  r.f_out_target = number("f_out_target");
  if (!doc.contains("config")) throw SchemaError("missing field 'config'");
  r.config = load_device_config(doc.at("config"));
  validate(r);
  return r;
}

nlohmann::json to_json(const SelectionResult& result) {
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& s : result.trace) {
    steps.push_back({{"protocol", s.protocol.id},
                     {"f_before", s.f_before},
                     {"f_after", s.f_after},
                     {"duration", s.duration},
                     {"success_prob", s.success_prob}});
  }
  nlohmann::json ids = nlohmann::json::array();
  for (const ProtocolSpec& p : result.p_out) ids.push_back(p.id);
  return {{"protocols", ids},
          {"f_final", result.f_final},
          {"time_used", result.time_used},
          {"reason", result.reason},
          {"trace", steps}};
}

std::string describe(const SelectionResult& result, double f_in) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "input fidelity  %.6f\n", f_in);
  out << buf;
  int step = 1;
  for (const StepRecord& s : result.trace) {
    std::snprintf(buf, sizeof buf,
                  "step %d  %-18s %.6f -> %.6f  duration %.3f us  success %.4f\n", step++,
                  s.protocol.label().c_str(), s.f_before, s.f_after, s.duration * 1e6,
                  s.success_prob);
    out << buf;
  }
  if (result.trace.empty()) out << "no protocol applied\n";
  std::snprintf(buf, sizeof buf, "final fidelity  %.6f\ntime used       %.3f us\n",
                result.f_final, result.time_used * 1e6);
  out << buf << "stopped: " << result.reason << '\n';
  return out.str();
}

}  // namespace eppsel
