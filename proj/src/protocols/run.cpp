#include <cmath>

#include "eppsel/errors.hpp"
#include "eppsel/protocols.hpp"

namespace eppsel {

namespace {

const DeviceConfig* config_of(const NoiseModel& noise) {
  return noise.is_noiseless() ? nullptr : &noise.config();
}

// Pair state on (0, 1) right after the generation gates.
DensityMatrix generated_pair(const NoiseModel& noise) {
  if (!noise.is_noiseless() && noise.num_qubits() < 2) {
    throw ConstructionError("EP generation needs at least two qubits");
  }
  const TimedCircuit c = build_ep_generation(0.0, config_of(noise));
  DensityMatrix rho = new_ground_state(2);
  const bool noisy = !noise.is_noiseless();
  for (const GateOp& op : c.ops) {
    if (op.kind == GateKind::Delay) continue;
    rho = apply_operator(rho, gate_matrix(op.kind, op.param), op.targets);
    if (!noisy) continue;
    if (op.kind == GateKind::CNOT) {
      const GateNoise& gn = noise.cx(0, 1);
      const int a[1] = {0}, b[1] = {1};
      rho = apply_channel(rho, gn.thermal[0], a);
      rho = apply_channel(rho, gn.thermal[1], b);
      if (gn.depolarizing_p > 0.0) {
        rho = apply_channel(rho, two_qubit_depolarizing_channel(gn.depolarizing_p), op.targets);
      }
    } else {
      const GateNoise& gn =
          noise.single_qubit(op.kind == GateKind::SX ? "sx" : "rz", op.targets[0]);
      rho = apply_channel(rho, gn.thermal[0], op.targets);
      if (gn.depolarizing_p > 0.0) {
        rho = apply_channel(rho, depolarizing_channel(gn.depolarizing_p), op.targets);
      }
    }
  }
  return rho;
}

DensityMatrix idled(const DensityMatrix& rho, double t, const NoiseModel& noise) {
  if (t <= 0.0 || noise.is_noiseless()) return rho;
  const int a[1] = {0}, b[1] = {1};
  DensityMatrix s = apply_channel(rho, noise.idle(0, t), a);
  return apply_channel(s, noise.idle(1, t), b);
}

double idle_fidelity(const DensityMatrix& rho, double t, const NoiseModel& noise) {
  return fidelity_to_bell(idled(rho, t, noise), {0, 1});
}

}  // namespace

DensityMatrix raw_pair_state(double delay_t, const NoiseModel& noise) {
  if (delay_t < 0.0) throw DomainError("delay must be non-negative");
  return idled(generated_pair(noise), delay_t, noise);
}

double raw_pair_fidelity(double delay_t, const NoiseModel& noise) {
  if (delay_t < 0.0) throw DomainError("delay must be non-negative");
  return idle_fidelity(generated_pair(noise), delay_t, noise);
}

double calibrate_delay_for_fidelity(double f_target, const NoiseModel& noise) {
  if (!(f_target > 0.0 && f_target <= 1.0)) throw DomainError("fidelity must lie in (0, 1]");
  const DensityMatrix rho = generated_pair(noise);
  const double f0 = idle_fidelity(rho, 0.0, noise);
  if (noise.is_noiseless()) {
    throw RangeError("a noiseless model cannot tune the raw fidelity by delay", f0);
  }
  if (f_target > f0 + 1e-12) {
    throw RangeError("target fidelity " + std::to_string(f_target) +
                         " exceeds the achievable raw fidelity " + std::to_string(f0),
                     f0);
  }
  if (f_target >= f0) return 0.0;

  double lo = 0.0, hi = 1e-9;
  int steps = 0;
  while (idle_fidelity(rho, hi, noise) > f_target) {
    lo = hi;
    hi *= 2.0;
    if (++steps > 80) {
      throw RangeError("target fidelity " + std::to_string(f_target) +
                           " lies below the idling floor",
                       f0);
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (idle_fidelity(rho, mid, noise) > f_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PurifyOutcome run_protocol(double f_in, const ProtocolSpec& spec, const NoiseModel& noise,
                           const EPSource& source) {
  if (noise.is_noiseless()) return run_protocol_on_input(make_werner(f_in), spec, noise, source);
  const double delay = calibrate_delay_for_fidelity(f_in, noise);
  const TimedCircuit c = build_protocol_circuit(spec, source, delay, &noise.config());
  try {
    return execute_circuit(c, noise);
  } catch (const DegenerateBranchError&) {
    return {0.0, 0.0, c.total_duration};
  }
}

PurifyOutcome run_protocol_on_input(const DensityMatrix& raw, const ProtocolSpec& spec,
                                    const NoiseModel& noise, const EPSource& source) {
  const TimedCircuit c = build_protocol_circuit(spec, source, 0.0, config_of(noise));
  try {
    return execute_circuit(c, noise, &raw);
  } catch (const DegenerateBranchError&) {
    return {0.0, 0.0, c.total_duration};
  }
}

}  // namespace eppsel
