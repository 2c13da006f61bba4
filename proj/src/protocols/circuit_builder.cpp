#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eppsel/errors.hpp"
#include "eppsel/protocols.hpp"
#include "expedient_fixture.hpp"

namespace eppsel {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

struct PairRef {
  int slot;
};

struct ExpedientOp {
  std::string gate;
  std::vector<std::string> pairs;
  std::string control, target;
};

struct ExpedientRound {
  std::string carry;
  std::vector<std::string> fresh;
  std::vector<ExpedientOp> ops;
};

const ExpedientRound& expedient_round() {
  static const ExpedientRound round = [] {
    const json doc = json::parse(detail::kExpedientFixture);
    const json& r = doc.at("round");
    ExpedientRound out;
    out.carry = r.at("carry").get<std::string>();
    out.fresh = r.at("fresh").get<std::vector<std::string>>();
    for (const json& op : r.at("ops")) {
      ExpedientOp e;
      e.gate = op.at("gate").get<std::string>();
      if (op.contains("pairs")) e.pairs = op.at("pairs").get<std::vector<std::string>>();
      if (op.contains("control")) e.control = op.at("control").get<std::string>();
      if (op.contains("target")) e.target = op.at("target").get<std::string>();
      out.ops.push_back(std::move(e));
    }
    return out;
  }();
  return round;
}

class Builder {
 public:
  Builder(const EPSource& source, double input_delay, const DeviceConfig* config, bool reuse,
          int num_slots)
      : source_(source),
        input_delay_(input_delay),
        config_(config),
        reuse_(reuse),
        busy_(2 * num_slots, 0.0),
        live_(2 * num_slots, false),
        fresh_(2 * num_slots, false),
        slot_free_(num_slots, 0.0),
        slot_used_(num_slots, false) {}

  // ---- timing lookups ----
  double length1(const char* name, int q) const {
    return config_ ? config_->gate(name, {q}).gate_length : 0.0;
  }
  double length_cx(int a, int b) const {
    return config_ ? config_->gate("cx", {a, b}).gate_length : 0.0;
  }
  double readout(int q) const {
    return config_ ? config_->qubits.at(q).readout_length : 0.0;
  }
  double reset_length(int q) const {
    return config_ ? config_->gate("reset", {q}).gate_length : 0.0;
  }

  // Places an op no earlier than `earliest` and after every target is free;
  // idle gaps on live targets become Delay ops.
  double place(GateKind kind, std::vector<int> qs, double earliest, double duration,
               double param = 0.0, int ep = -1) {
    double start = std::max(earliest, barrier_);
    for (int q : qs) start = std::max(start, busy_[q]);
    for (int q : qs) {
      const double gap = start - busy_[q];
      if (live_[q] && gap > 0.0) {
        GateOp d{GateKind::Delay, {q}, busy_[q], gap, gap,
                 fresh_[q] ? DelayRole::GenerationWait : DelayRole::Idle, -1};
        ops_.push_back(d);
      }
    }
    ops_.push_back(GateOp{kind, qs, start, duration, param, DelayRole::None, ep});
    for (int q : qs) {
      busy_[q] = start + duration;
      fresh_[q] = false;
    }
    return start + duration;
  }

  double place_h(int q, double earliest, int ep = -1) {
    double t = place(GateKind::RZ, {q}, earliest, length1("rz", q), kPi / 2, ep);
    t = place(GateKind::SX, {q}, t, length1("sx", q), 0.0, ep);
    return place(GateKind::RZ, {q}, t, length1("rz", q), kPi / 2, ep);
  }

  double place_sxdg(int q, double earliest) {
    double t = place(GateKind::RZ, {q}, earliest, length1("rz", q), kPi);
    t = place(GateKind::SX, {q}, t, length1("sx", q));
    return place(GateKind::RZ, {q}, t, length1("rz", q), kPi);
  }

  // Generation fragment for the next raw EP into `slot`.
  void generate(int slot, double not_before) {
    const int k = static_cast<int>(ep_slots_.size());  // 0-based
    const int a = 2 * slot, b = 2 * slot + 1;
    const int n = std::max(1, source_.throughput_n);
    const double available = ((k + n) / n) * source_.tau;  // ceil((k+1)/n) * tau
    const double gen = 2 * length1("rz", a) + length1("sx", a) + length_cx(a, b);
    const double start = std::max({not_before, slot_free_[slot], available - gen, 0.0});
    busy_[a] = std::max(busy_[a], start);
    busy_[b] = std::max(busy_[b], start);
    live_[a] = false;
    live_[b] = false;
    place_h(a, start, k);
    const double ready = place(GateKind::CNOT, {a, b}, start, length_cx(a, b), 0.0, k);
    live_[a] = true;
    live_[b] = true;
    if (input_delay_ > 0.0) {
      GateOp d{GateKind::Delay, {a, b}, ready, 0.0, input_delay_, DelayRole::Transport, k};
      ops_.push_back(d);
    }
    fresh_[a] = true;
    fresh_[b] = true;
    ep_slots_.emplace_back(a, b);
    slot_used_[slot] = true;
  }

  int allocate_slot() {
    for (std::size_t s = 0; s < slot_used_.size(); ++s) {
      if (!slot_used_[s]) return static_cast<int>(s);
    }
    throw ConstructionError("protocol needs more slots than its qubit budget");
  }

  // Fresh raw EP: generated now (reuse) or taken from the pre-generated pool.
  PairRef acquire() {
    if (!reuse_) {
      if (pool_next_ >= pool_.size()) throw ConstructionError("raw EP pool exhausted");
      return {pool_[pool_next_++]};
    }
    const int slot = allocate_slot();
    generate(slot, 0.0);
    return {slot};
  }

  void pregenerate(int count) {
    for (int i = 0; i < count; ++i) {
      const int slot = allocate_slot();
      generate(slot, 0.0);
      pool_.push_back(slot);
    }
    // Purification starts once the whole buffer is filled.
    for (double t : busy_) barrier_ = std::max(barrier_, t);
  }

  void measure_pair(int slot) {
    const int a = 2 * slot, b = 2 * slot + 1;
    const double end =
        place(GateKind::MeasureZ, {a, b}, 0.0, std::max(readout(a), readout(b)));
    live_[a] = false;
    live_[b] = false;
    measured_.emplace_back(a, b);
    if (reuse_) {
      const double ra = place(GateKind::Reset, {a}, end, reset_length(a));
      const double rb = place(GateKind::Reset, {b}, end, reset_length(b));
      slot_free_[slot] = std::max(ra, rb);
      slot_used_[slot] = false;
    }
  }

  void bilateral_cx(int control_slot, int target_slot) {
    const int ca = 2 * control_slot, cb = ca + 1;
    const int ta = 2 * target_slot, tb = ta + 1;
    place(GateKind::CNOT, {ca, ta}, 0.0, length_cx(ca, ta));
    place(GateKind::CNOT, {cb, tb}, 0.0, length_cx(cb, tb));
  }

  // One two-to-one round; `level` counts nesting depth from 1.
  PairRef two_to_one_round(Family family, int level, PairRef kept, PairRef aux) {
    const int pairs[2] = {kept.slot, aux.slot};
    if (family == Family::DEJMPS) {
      for (int s : pairs) {
        if (level >= 2) {
          place(GateKind::SX, {2 * s}, 0.0, length1("sx", 2 * s));
          place_sxdg(2 * s + 1, 0.0);
        }
        place(GateKind::S, {2 * s}, 0.0, length1("rz", 2 * s));
        place(GateKind::Sdg, {2 * s + 1}, 0.0, length1("rz", 2 * s + 1));
      }
    } else if (level >= 2) {
      for (int s : pairs) place(GateKind::Twirl, {2 * s, 2 * s + 1}, 0.0, 0.0);
    }
    bilateral_cx(kept.slot, aux.slot);
    measure_pair(aux.slot);
    return kept;
  }

  PairRef nested(Family family, int level) {
    if (level == 0) return acquire();
    PairRef kept = nested(family, level - 1);
    PairRef aux = nested(family, level - 1);
    return two_to_one_round(family, level, kept, aux);
  }

  PairRef expedient_rounds(int rounds) {
    const ExpedientRound& r = expedient_round();
    PairRef carry = acquire();
    for (int i = 0; i < rounds; ++i) {
      std::map<std::string, int> slot{{r.carry, carry.slot}};
      for (const std::string& name : r.fresh) slot[name] = acquire().slot;
      for (const ExpedientOp& op : r.ops) {
        if (op.gate == "cx") {
          bilateral_cx(slot.at(op.control), slot.at(op.target));
        } else if (op.gate == "h") {
          for (const std::string& p : op.pairs) {
            place_h(2 * slot.at(p), 0.0);
            place_h(2 * slot.at(p) + 1, 0.0);
          }
        } else if (op.gate == "measure") {
          for (const std::string& p : op.pairs) measure_pair(slot.at(p));
        } else {
          throw ConstructionError("unknown EXPEDIENT fixture gate '" + op.gate + "'");
        }
      }
    }
    return carry;
  }

  TimedCircuit finish(PairRef kept) {
    TimedCircuit c;
    c.num_qubits = static_cast<int>(busy_.size());
    std::stable_sort(ops_.begin(), ops_.end(), [](const GateOp& x, const GateOp& y) {
      return x.start_time < y.start_time;
    });
    c.ops = std::move(ops_);
    c.measured_pairs = std::move(measured_);
    c.kept_pair = {2 * kept.slot, 2 * kept.slot + 1};
    c.ep_slots = std::move(ep_slots_);
    for (const GateOp& op : c.ops) {
      c.total_duration = std::max(c.total_duration, op.start_time + op.duration);
    }
    return c;
  }

 private:
  EPSource source_;
  double input_delay_;
  const DeviceConfig* config_;
  bool reuse_;
  std::vector<double> busy_;
  std::vector<bool> live_;
  std::vector<bool> fresh_;
  std::vector<double> slot_free_;
  std::vector<bool> slot_used_;
  std::vector<int> pool_;
  std::size_t pool_next_ = 0;
  double barrier_ = 0.0;
  std::vector<GateOp> ops_;
  std::vector<std::pair<int, int>> measured_;
  std::vector<std::pair<int, int>> ep_slots_;
};

}  // namespace

TimedCircuit build_ep_generation(double delay_t, const DeviceConfig* config,
                                 std::pair<int, int> qubits) {
  if (delay_t < 0.0) throw DomainError("delay must be non-negative");
  const auto [a, b] = qubits;
  auto len = [&](const char* name, std::vector<int> qs) {
    return config ? config->gate(name, qs).gate_length : 0.0;
  };
  TimedCircuit c;
  c.num_qubits = std::max(a, b) + 1;
  double t = 0.0;
  auto add = [&](GateKind k, std::vector<int> qs, double d, double param) {
    c.ops.push_back(GateOp{k, qs, t, d, param, DelayRole::None, 0});
    t += d;
  };
  add(GateKind::RZ, {a}, len("rz", {a}), kPi / 2);
  add(GateKind::SX, {a}, len("sx", {a}), 0.0);
  add(GateKind::RZ, {a}, len("rz", {a}), kPi / 2);
  add(GateKind::CNOT, {a, b}, len("cx", {a, b}), 0.0);
  c.ops.push_back(GateOp{GateKind::Delay, {a, b}, t, delay_t, delay_t, DelayRole::Transport, 0});
  c.kept_pair = {a, b};
  c.ep_slots = {{a, b}};
  c.total_duration = t + delay_t;
  return c;
}

TimedCircuit build_protocol_circuit(const ProtocolSpec& spec, const EPSource& source,
                                    double input_delay, const DeviceConfig* config) {
  if (input_delay < 0.0) throw ConstructionError("input delay must be non-negative");
  if (source.tau < 0.0 || source.throughput_n < 1) {
    throw ConstructionError("EP source needs tau >= 0 and throughput >= 1");
  }
  if (spec.rounds < 1 || spec.qubits_needed % 2 != 0 ||
      (spec.family == Family::EXPEDIENT && spec.reuse)) {
    throw ConstructionError("inconsistent protocol spec '" + spec.id + "'");
  }
  if (config && config->num_qubits() < spec.qubits_needed) {
    throw ConstructionError("protocol " + spec.id + " needs " +
                            std::to_string(spec.qubits_needed) + " qubits; device has " +
                            std::to_string(config->num_qubits()));
  }
  Builder b(source, input_delay, config, spec.reuse, spec.qubits_needed / 2);
  if (!spec.reuse) b.pregenerate(spec.ep_demand);
  PairRef kept = spec.family == Family::EXPEDIENT ? b.expedient_rounds(spec.rounds)
                                                  : b.nested(spec.family, spec.rounds);
  TimedCircuit c = b.finish(kept);
  if (static_cast<int>(c.ep_slots.size()) != spec.ep_demand) {
    throw ConstructionError("protocol " + spec.id + " consumed " +
                            std::to_string(c.ep_slots.size()) + " EPs; the catalog lists " +
                            std::to_string(spec.ep_demand));
  }
  return c;
}

double estimate_duration(const ProtocolSpec& spec, const DeviceConfig& config,
                         const EPSource& source) {
  return build_protocol_circuit(spec, source, 0.0, &config).total_duration;
}

std::string TimedCircuit::listing() const {
  std::ostringstream out;
  char buf[64];
  for (const GateOp& op : ops) {
    std::snprintf(buf, sizeof buf, "%12.3f ns  ", op.start_time * 1e9);
    out << buf << gate_name(op.kind);
    for (int q : op.targets) out << " q" << q;
    if (op.kind == GateKind::RZ) {
      std::snprintf(buf, sizeof buf, "  theta=%.6f", op.param);
      out << buf;
    } else if (op.kind == GateKind::Delay) {
      std::snprintf(buf, sizeof buf, "  t=%.3f ns", op.param * 1e9);
      out << buf;
      if (op.role == DelayRole::Transport) out << " transport";
      if (op.role == DelayRole::GenerationWait) out << " wait";
      if (op.role == DelayRole::Idle) out << " idle";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace eppsel
