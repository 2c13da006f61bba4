#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "eppsel/bench.hpp"
#include "eppsel/errors.hpp"
#include "parallel.hpp"

namespace eppsel {

namespace {

constexpr int kSweepQubits = 18;

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw DomainError("axis needs at least one point");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    v[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  }
  return v;
}

struct Coherence {
  double t1, t2;
};

Coherence coherence(SweepKind kind) {
  switch (kind) {
    case SweepKind::Depolarizing: return {100e-6, 100e-6};
    case SweepKind::AmplitudeDamping: return {5e-7, 1e-6};
    case SweepKind::PhaseDamping: return {1e-3, 1e-6};
    case SweepKind::Idling: return {20e-6, 20e-6};
  }
  return {1.0, 1.0};
}

DeviceConfig bare_device(SweepKind kind) {
  DeviceConfig c;
  c.name = "sweep-" + sweep_kind_name(kind);
  const Coherence co = coherence(kind);
  for (int q = 0; q < kSweepQubits; ++q) c.qubits.push_back({co.t1, co.t2, 0.0, 0.0, 0.0});
  return c;
}

bool monotone(const std::vector<double>& axis) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) return false;
  }
  return !axis.empty();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string sweep_kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::Depolarizing: return "depolarizing";
    case SweepKind::AmplitudeDamping: return "amplitude_damping";
    case SweepKind::PhaseDamping: return "phase_damping";
    case SweepKind::Idling: return "idling";
  }
  return "?";
}

SweepKind parse_sweep_kind(const std::string& text) {
  for (SweepKind k : {SweepKind::Depolarizing, SweepKind::AmplitudeDamping,
                      SweepKind::PhaseDamping, SweepKind::Idling}) {
    if (text == sweep_kind_name(k)) return k;
  }
  throw DomainError("unknown sweep kind '" + text + "'");
}

std::vector<double> default_f_axis(int points) { return linspace(0.52, 1.0, points); }

std::vector<double> default_error_axis(SweepKind kind, int points) {
  switch (kind) {
    case SweepKind::Depolarizing: return linspace(0.0, 0.048, points);
    case SweepKind::AmplitudeDamping: return linspace(0.0, 0.48, points);
    case SweepKind::PhaseDamping: {
      std::vector<double> v = linspace(-8.0, -6.0, points);
      for (double& x : v) x = std::pow(10.0, x);
      return v;
    }
    case SweepKind::Idling: return linspace(0.0, 480.0, points);
  }
  return {};
}

DeviceConfig sweep_device(SweepKind kind, double value) {
  DeviceConfig c = bare_device(kind);
  switch (kind) {
    case SweepKind::Depolarizing:
      if (!(value >= 0.0 && value <= 1.0)) throw DomainError("gate error must lie in [0, 1]");
      c.gates.push_back({"cx", {0, 2}, value, 0.0});
      break;
    case SweepKind::AmplitudeDamping:
      if (!(value >= 0.0 && value < 1.0)) throw DomainError("damping must lie in [0, 1)");
      c.gates.push_back({"cx", {0, 2}, 0.0, -coherence(kind).t1 * std::log1p(-value)});
      break;
    case SweepKind::PhaseDamping:
      if (!(value >= 0.0)) throw DomainError("gate length must be non-negative");
      c.gates.push_back({"cx", {0, 2}, 0.0, value});
      break;
    case SweepKind::Idling:
      if (!(value >= 0.0)) throw DomainError("wait must be non-negative");
      break;
  }
  return c;
}

EPSource sweep_source(SweepKind kind, double value) {
  if (kind == SweepKind::Idling) return {value * 1e-9, 1};
  return {0.0, 1};
}

PhaseGrid sweep_phase_diagram(SweepKind kind, const std::vector<double>& f_axis,
                              const std::vector<double>& error_axis, int jobs) {
  if (!monotone(f_axis) || !monotone(error_axis)) {
    throw DomainError("sweep axes must be non-empty and strictly increasing");
  }
  for (double f : f_axis) {
    if (!(f > 0.5 && f <= 1.0)) throw DomainError("fidelity axis must lie in (0.5, 1]");
  }
  PhaseGrid grid;
  grid.kind = kind;
  grid.f_axis = f_axis;
  grid.error_axis = error_axis;
  grid.cells.resize(f_axis.size() * error_axis.size());

  // Raw pairs come from ideal generation plus idling, so the swept error is
  // the only imperfection inside the protocol.
  const NoiseModel tuning = build_noise_model(bare_device(kind));
  std::vector<DensityMatrix> raws;
  for (double f : f_axis) {
    const double t = f >= raw_pair_fidelity(0.0, tuning) ? 0.0
                                                        : calibrate_delay_for_fidelity(f, tuning);
    raws.push_back(raw_pair_state(t, tuning));
  }
  std::vector<NoiseModel> models;
  for (double e : error_axis) models.push_back(build_noise_model(sweep_device(kind, e)));

  const int nf = static_cast<int>(f_axis.size());
  detail::parallel_for(static_cast<int>(grid.cells.size()), jobs, [&](int i) {
    const int fi = i % nf, ei = i / nf;
    const double f_real = fidelity_to_bell(raws[fi], {0, 1});
    const EPSource src = sweep_source(kind, error_axis[ei]);
    GridCell cell{f_axis[fi], error_axis[ei], "none", -std::numeric_limits<double>::infinity()};
    std::string best_id;
    for (const ProtocolSpec& spec : protocol_registry()) {
      const double df = run_protocol_on_input(raws[fi], spec, models[ei], src).f_out - f_real;
      if (df > cell.delta_f_max) {
        cell.delta_f_max = df;
        best_id = spec.id;
      }
    }
    if (cell.delta_f_max > 1e-12) cell.best_protocol_id = best_id;
    grid.cells[i] = cell;
  });
  return grid;
}

std::string grid_csv(const PhaseGrid& grid) {
  std::ostringstream out;
  out << "f_in,error_value,best_protocol_id,delta_f_max\n";
  for (const GridCell& c : grid.cells) {
    out << fmt(c.f_in) << ',' << fmt(c.error_value) << ',' << c.best_protocol_id << ','
        << fmt(c.delta_f_max) << '\n';
  }
  return out.str();
}

}  // namespace eppsel
