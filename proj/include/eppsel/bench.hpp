#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eppsel/selector.hpp"

namespace eppsel {

// ---- baselines -------------------------------------------------------------

// Repeats EXPEDIENT x1 while it improves fidelity and fits the budget.
SelectionResult default_baseline(const SelectionRequest& request, const NoiseModel& noise);
// Greedy: each step simulates every capacity-feasible protocol and keeps the
// best one; ties go to catalog order.
SelectionResult exhaustive_search(const SelectionRequest& request, const NoiseModel& noise);

// ---- scenario sampling -----------------------------------------------------

enum class Group { RandomBetter, RandomCurrent, RandomWorse, DeviceFixture };

std::string group_name(Group group);
// Accepts 1/2/3, the group names, and "device_fixture"; throws DomainError.
Group parse_group(const std::string& text);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SamplingRanges {
  // Device magnitudes for the current-hardware group.
  Range t1, t2, sx_error, sx_length, cx_error, cx_length, readout_error, readout_length;
  // Request parameters, shared by all groups.
  Range f_in, f_out_margin, buffer_size, t_qos, tau, throughput_n;
  double better_scale = 0.1;
  double worse_scale = 10.0;
};

SamplingRanges load_sampling_ranges(const nlohmann::json& doc);
SamplingRanges load_sampling_ranges_file(const std::filesystem::path& path);

struct Scenario {
  SelectionRequest request;
  Group group = Group::RandomCurrent;
  std::string name;
};

// Deterministic in (group, seed, index). Error-like magnitudes scale by the
// group factor, T1 and T2 by its inverse.
Scenario sample_scenario(Group group, const SamplingRanges& ranges, std::uint64_t seed, int index);

// Request used for every shipped device fixture.
SelectionRequest device_fixture_request(const DeviceConfig& config);
std::vector<DeviceConfig> load_device_fixtures(const std::filesystem::path& dir);

// ---- benchmark -------------------------------------------------------------

enum class Outcome { Failure, Success, Nan };
std::string outcome_name(Outcome outcome);

struct BenchRow {
  std::string scenario;
  Outcome outcome = Outcome::Nan;
  double f_in = 0.0;
  double f_selected = 0.0;
  double f_default = 0.0;
  double f_exhaustive = 0.0;
  std::vector<std::string> protocols;  // selected sequence
  std::vector<std::string> exhaustive_protocols;
  bool optimal = false;
};

struct BenchReport {
  double p_failure = 0.0;
  double p_success = 0.0;
  double p_nan = 0.0;
  double p_optimal = 0.0;  // among successes
  double delta_f_max = 0.0;
  double delta_f_mean = 0.0;
  std::vector<BenchRow> rows;
};

BenchRow evaluate_scenario(const Scenario& scenario, const Thresholds& th);
BenchReport summarize(std::vector<BenchRow> rows);

// `jobs` <= 0 uses the hardware concurrency; output does not depend on it.
BenchReport run_benchmark(Group group, int trials, std::uint64_t seed,
                          const SamplingRanges& ranges, const Thresholds& th, int jobs = 0);
BenchReport run_device_benchmark(const std::vector<DeviceConfig>& devices, const Thresholds& th,
                                 int jobs = 0);

std::string report_csv(const BenchReport& report);
std::string summary_line(const BenchReport& report);

// ---- phase diagrams --------------------------------------------------------

enum class SweepKind { Depolarizing, AmplitudeDamping, PhaseDamping, Idling };

std::string sweep_kind_name(SweepKind kind);
SweepKind parse_sweep_kind(const std::string& text);

// Fidelity axis 0.52 .. 1.0 and the per-kind error axis:
//   depolarizing       CX gate error 0 .. 0.048
//   amplitude_damping  damping probability per CX 0 .. 0.48
//   phase_damping      CX gate length 1e-8 .. 1e-6 s, log-spaced
//   idling             per-EP wait 0 .. 480 ns
std::vector<double> default_f_axis(int points);
std::vector<double> default_error_axis(SweepKind kind, int points);

// Single-error device and EP source for one error-axis value.
DeviceConfig sweep_device(SweepKind kind, double error_value);
EPSource sweep_source(SweepKind kind, double error_value);

struct GridCell {
  double f_in = 0.0;
  double error_value = 0.0;
  std::string best_protocol_id;  // "none" when nothing improves
  double delta_f_max = 0.0;
};

struct PhaseGrid {
  SweepKind kind = SweepKind::Depolarizing;
  std::vector<double> f_axis;
  std::vector<double> error_axis;
  std::vector<GridCell> cells;  // error-major: cells[e * f_axis.size() + f]

  const GridCell& at(std::size_t f_index, std::size_t e_index) const {
    return cells[e_index * f_axis.size() + f_index];
  }
};

PhaseGrid sweep_phase_diagram(SweepKind kind, const std::vector<double>& f_axis,
                              const std::vector<double>& error_axis, int jobs = 0);
std::string grid_csv(const PhaseGrid& grid);

}  // namespace eppsel
