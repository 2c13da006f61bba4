#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "eppsel/errors.hpp"
#include "eppsel/protocols.hpp"

namespace eppsel {

namespace {

// Register split into independent clusters; qubits that never interacted
// stay in separate density matrices.
class ClusterRegister {
 public:
  explicit ClusterRegister(int num_qubits) : owner_(num_qubits, -1) {}

  // Merges the clusters of `qs` and returns the cluster index.
  int merge(const std::vector<int>& qs) {
    int target = -1;
    for (int q : qs) {
      ensure(q);
      const int c = owner_[q];
      if (target < 0) {
        target = c;
      } else if (c != target) {
        Cluster& a = clusters_[target];
        Cluster& b = clusters_[c];
        a.state = tensor(a.state, b.state);
        a.qubits.insert(a.qubits.end(), b.qubits.begin(), b.qubits.end());
        for (int x : b.qubits) owner_[x] = target;
        b.qubits.clear();
      }
    }
    return target;
  }

  std::vector<int> local(int c, const std::vector<int>& qs) const {
    std::vector<int> out;
    for (int q : qs) {
      const auto& v = clusters_[c].qubits;
      out.push_back(static_cast<int>(std::find(v.begin(), v.end(), q) - v.begin()));
    }
    return out;
  }

  void apply(const Matrix& u, const std::vector<int>& qs) {
    const int c = merge(qs);
    const std::vector<int> l = local(c, qs);
    clusters_[c].state = apply_operator(clusters_[c].state, u, l);
  }

  void apply(const QuantumChannel& ch, const std::vector<int>& qs) {
    const int c = merge(qs);
    const std::vector<int> l = local(c, qs);
    clusters_[c].state = apply_channel(clusters_[c].state, ch, l);
  }

  // Coincidence post-selection on (a, b); returns the acceptance probability.
  double measure(int a, int b, const NoiseModel& noise) {
    const int c = merge({a, b});
    Cluster& cl = clusters_[c];
    std::vector<Confusion> conf;
    for (int q : cl.qubits) conf.push_back(noise.confusion(q));
    const std::vector<int> l = local(c, {a, b});
    const std::pair<int, int> pair{l[0], l[1]};
    Matrix block = coincidence_block(cl.state, std::span(&pair, 1), conf);
    const double p = block.trace().real();
    if (!(p > 1e-12)) throw DegenerateBranchError("coincidence branch has zero probability");
    std::vector<int> rest;
    for (int q : cl.qubits) {
      if (q != a && q != b) rest.push_back(q);
    }
    owner_[a] = owner_[b] = -2;  // measured, must be reset before reuse
    cl.qubits = rest;
    if (rest.empty()) {
      cl.state = DensityMatrix(Matrix::Ones(1, 1));
    } else {
      cl.state = DensityMatrix(block / p);
    }
    return p;
  }

  void discard(int q) {
    if (owner_[q] < 0) return;
    Cluster& cl = clusters_[owner_[q]];
    const std::vector<int> l = local(owner_[q], {q});
    if (cl.qubits.size() == 1) {
      cl.qubits.clear();
    } else {
      cl.state = partial_trace(cl.state, l);
      cl.qubits.erase(cl.qubits.begin() + l[0]);
    }
    owner_[q] = -2;
  }

  void reset(int q, double p) {
    discard(q);
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0 - p;
    m(1, 1) = p;
    add_cluster(DensityMatrix(m), {q});
  }

  void inject(const DensityMatrix& pair_state, int a, int b) {
    discard(a);
    discard(b);
    add_cluster(pair_state, {a, b});
  }

  // State of (a, b) in that qubit order, with all other qubits traced out.
  DensityMatrix reduced(int a, int b) {
    const int c = merge({a, b});
    Cluster& cl = clusters_[c];
    std::vector<int> others;
    for (std::size_t i = 0; i < cl.qubits.size(); ++i) {
      if (cl.qubits[i] != a && cl.qubits[i] != b) others.push_back(static_cast<int>(i));
    }
    DensityMatrix s = others.empty() ? cl.state : partial_trace(cl.state, others);
    std::vector<int> kept;
    for (int q : cl.qubits) {
      if (q == a || q == b) kept.push_back(q);
    }
    if (kept[0] != a) {
      const int order[2] = {1, 0};
      s = permute_qubits(s, order);
    }
    return s;
  }

 private:
  struct Cluster {
    DensityMatrix state;
    std::vector<int> qubits;
  };

  void ensure(int q) {
    if (q < 0 || q >= static_cast<int>(owner_.size())) {
      throw IndexError("qubit " + std::to_string(q) + " outside the register");
    }
    if (owner_[q] == -2) throw DomainError("qubit " + std::to_string(q) + " used after measurement");
    if (owner_[q] < 0) add_cluster(new_ground_state(1), {q});
  }

  void add_cluster(DensityMatrix s, std::vector<int> qs) {
    for (int q : qs) owner_[q] = static_cast<int>(clusters_.size());
    clusters_.push_back(Cluster{std::move(s), std::move(qs)});
  }

  std::vector<Cluster> clusters_;
  std::vector<int> owner_;  // -1 untouched, -2 measured or discarded
};

const char* noise_entry(GateKind kind) {
  switch (kind) {
    case GateKind::SX: return "sx";
    case GateKind::X: return "x";
    default: return "rz";
  }
}

bool joins(const GateOp& op) {
  return op.kind == GateKind::CNOT || op.kind == GateKind::Twirl;
}

// Any order that keeps each qubit's op sequence is equivalent, since ops on
// disjoint qubits commute. Ops that cannot entangle run first, so aux pairs
// are measured before the kept pair joins the next one and clusters stay
// small. Joining ops go in time order.
std::vector<const GateOp*> processing_order(const TimedCircuit& circuit) {
  const std::vector<GateOp>& ops = circuit.ops;
  std::vector<std::vector<std::size_t>> queue(circuit.num_qubits);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (int q : ops[i].targets) queue.at(q).push_back(i);
  }
  std::vector<std::size_t> head(circuit.num_qubits, 0);
  std::vector<bool> done(ops.size(), false);
  auto ready = [&](std::size_t i) {
    for (int q : ops[i].targets) {
      if (queue[q][head[q]] != i) return false;
    }
    return true;
  };
  std::vector<const GateOp*> order;
  std::size_t first = 0;
  while (order.size() < ops.size()) {
    while (done[first]) ++first;
    std::size_t pick = ops.size();
    for (std::size_t i = first; i < ops.size(); ++i) {
      if (done[i] || !ready(i)) continue;
      if (!joins(ops[i])) {
        pick = i;
        break;
      }
      if (pick == ops.size()) pick = i;
    }
    done[pick] = true;
    for (int q : ops[pick].targets) ++head[q];
    order.push_back(&ops[pick]);
  }
  return order;
}

}  // namespace

PurifyOutcome execute_circuit(const TimedCircuit& circuit, const NoiseModel& noise,
                              const DensityMatrix* raw_input) {
  if (raw_input && raw_input->num_qubits() != 2) {
    throw DomainError("raw EP input must be a two-qubit state");
  }
  ClusterRegister reg(circuit.num_qubits);
  std::set<int> injected;
  double success = 1.0;
  const bool noisy = !noise.is_noiseless();
  const QuantumChannel twirl = werner_twirl_channel();

  for (const GateOp* next : processing_order(circuit)) {
    const GateOp& op = *next;
    if (raw_input && op.ep_index >= 0) {
      if (injected.insert(op.ep_index).second) {
        const auto [a, b] = circuit.ep_slots.at(op.ep_index);
        reg.inject(*raw_input, a, b);
      }
      continue;
    }
    switch (op.kind) {
      case GateKind::RZ:
      case GateKind::SX:
      case GateKind::X:
      case GateKind::S:
      case GateKind::Sdg: {
        reg.apply(gate_matrix(op.kind, op.param), op.targets);
        if (noisy) {
          const GateNoise& gn = noise.single_qubit(noise_entry(op.kind), op.targets[0]);
          reg.apply(gn.thermal[0], op.targets);
          if (gn.depolarizing_p > 0.0) reg.apply(depolarizing_channel(gn.depolarizing_p), op.targets);
        }
        break;
      }
      case GateKind::CNOT: {
        reg.apply(gate_matrix(op.kind), op.targets);
        if (noisy) {
          const GateNoise& gn = noise.cx(op.targets[0], op.targets[1]);
          reg.apply(gn.thermal[0], {op.targets[0]});
          reg.apply(gn.thermal[1], {op.targets[1]});
          if (gn.depolarizing_p > 0.0) {
            reg.apply(two_qubit_depolarizing_channel(gn.depolarizing_p), op.targets);
          }
        }
        break;
      }
      case GateKind::Delay:
        if (noisy && op.param > 0.0) {
          for (int q : op.targets) reg.apply(noise.idle(q, op.param), {q});
        }
        break;
      case GateKind::Twirl:
        reg.apply(twirl, op.targets);
        break;
      case GateKind::MeasureZ:
        success *= reg.measure(op.targets[0], op.targets[1], noise);
        break;
      case GateKind::Reset:
        for (int q : op.targets) reg.reset(q, noise.reset_error(q));
        break;
    }
  }

  const auto [ka, kb] = circuit.kept_pair;
  if (raw_input && injected.empty()) reg.inject(*raw_input, ka, kb);
  const DensityMatrix kept = reg.reduced(ka, kb);
  // Rounding can push a near-perfect pair a few ulps past 1.
  const double f = std::clamp(fidelity_to_bell(kept, {0, 1}), 0.0, 1.0);
  return {f, success, circuit.total_duration};
}

}  // namespace eppsel
