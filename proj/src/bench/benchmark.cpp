#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "eppsel/bench.hpp"
#include "eppsel/errors.hpp"
#include "parallel.hpp"

namespace eppsel {

namespace {

// Runs until nothing improves or the budget is spent; the fidelity target is
// ignored. A RangeError while embedding the current fidelity ends the search.
template <class Choose>
SelectionResult greedy(const SelectionRequest& request, const std::vector<ProtocolSpec>& pool,
                       Choose choose) {
  validate(request);
  SelectionResult result;
  double f = request.f_in;
  double remaining = request.t_qos;
  while (true) {
    const std::vector<ProtocolSpec> feasible = prune_by_capacity(pool, request, remaining);
    if (feasible.empty()) {
      result.reason = result.p_out.empty() ? kNoQualifyingProtocol : "budget exhausted";
      break;
    }
    const ProtocolSpec* best = nullptr;
    PurifyOutcome best_out;
    try {
      choose(feasible, f, best, best_out);
    } catch (const RangeError&) {
      result.reason = "input not realizable";
      break;
    }
    if (!best || best_out.f_out <= f) {
      result.reason = "no improvement";
      break;
    }
    result.trace.push_back({*best, f, best_out.f_out, best_out.duration, best_out.success_prob});
    result.p_out.push_back(*best);
    result.time_used += best_out.duration;
    remaining -= best_out.duration;
    f = best_out.f_out;
  }
  result.f_final = f;
  return result;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", x);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ";" : "") + items[i];
  return s;
}

std::vector<std::string> ids(const SelectionResult& r) {
  std::vector<std::string> out;
  for (const ProtocolSpec& p : r.p_out) out.push_back(p.id);
  return out;
}

}  // namespace

SelectionResult default_baseline(const SelectionRequest& request, const NoiseModel& noise) {
  const std::vector<ProtocolSpec> pool{find_protocol("expedient-1")};
  return greedy(request, pool,
                [&](const std::vector<ProtocolSpec>& feasible, double f, const ProtocolSpec*& best,
                    PurifyOutcome& out) {
                  best = &feasible.front();
                  out = run_protocol(f, *best, noise, request.source());
                });
}

SelectionResult exhaustive_search(const SelectionRequest& request, const NoiseModel& noise) {
  return greedy(request, protocol_registry(),
                [&](const std::vector<ProtocolSpec>& feasible, double f, const ProtocolSpec*& best,
                    PurifyOutcome& out) {
                  for (const ProtocolSpec& spec : feasible) {
                    const PurifyOutcome r = run_protocol(f, spec, noise, request.source());
                    if (!best || r.f_out > out.f_out) {
                      best = &spec;
                      out = r;
                    }
                  }
                });
}

std::string outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Failure: return "failure";
    case Outcome::Success: return "success";
    case Outcome::Nan: return "nan";
  }
  return "?";
}

BenchRow evaluate_scenario(const Scenario& scenario, const Thresholds& th) {
  const SelectionRequest& req = scenario.request;
  const NoiseModel noise = build_noise_model(req.config);
  const SelectionResult sel = select(req, th, noise);
  const SelectionResult def = default_baseline(req, noise);
  const SelectionResult exh = exhaustive_search(req, noise);
  BenchRow row;
  row.scenario = scenario.name;
  row.f_in = req.f_in;
  row.f_selected = sel.f_final;
  row.f_default = def.f_final;
  row.f_exhaustive = exh.f_final;
  row.protocols = ids(sel);
  row.exhaustive_protocols = ids(exh);
  if (exh.f_final <= req.f_in + 1e-12) {
    row.outcome = Outcome::Nan;
  } else if (sel.f_final < def.f_final - 1e-9) {
    row.outcome = Outcome::Failure;
  } else {
    row.outcome = Outcome::Success;
  }
  row.optimal = row.outcome == Outcome::Success && std::abs(sel.f_final - exh.f_final) <= 1e-6;
  return row;
}

BenchReport summarize(std::vector<BenchRow> rows) {
  BenchReport r;
  r.rows = std::move(rows);
  if (r.rows.empty()) return r;
  int failures = 0, successes = 0, nans = 0, optimal = 0;
  double sum_df = 0.0;
  r.delta_f_max = -1.0;
  for (const BenchRow& row : r.rows) {
    switch (row.outcome) {
      case Outcome::Failure: ++failures; break;
      case Outcome::Success: ++successes; break;
      case Outcome::Nan: ++nans; break;
    }
    if (row.optimal) ++optimal;
    const double df = row.f_selected - row.f_in;
    sum_df += df;
    r.delta_f_max = std::max(r.delta_f_max, df);
  }
  const double n = static_cast<double>(r.rows.size());
  r.p_failure = failures / n;
  r.p_success = successes / n;
  r.p_nan = nans / n;
  r.p_optimal = successes ? static_cast<double>(optimal) / successes : 0.0;
  r.delta_f_mean = sum_df / n;
  return r;
}

BenchReport run_benchmark(Group group, int trials, std::uint64_t seed,
                          const SamplingRanges& ranges, const Thresholds& th, int jobs) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (group == Group::DeviceFixture) {
    throw DomainError("device fixtures are benchmarked with run_device_benchmark");
  }
  std::vector<BenchRow> rows(trials);
  detail::parallel_for(trials, jobs, [&](int i) {
    rows[i] = evaluate_scenario(sample_scenario(group, ranges, seed, i), th);
  });
  return summarize(std::move(rows));
}

BenchReport run_device_benchmark(const std::vector<DeviceConfig>& devices, const Thresholds& th,
                                 int jobs) {
  if (devices.empty()) throw DomainError("no device fixtures to benchmark");
  std::vector<BenchRow> rows(devices.size());
  detail::parallel_for(static_cast<int>(devices.size()), jobs, [&](int i) {
    Scenario s{device_fixture_request(devices[i]), Group::DeviceFixture, devices[i].name};
    rows[i] = evaluate_scenario(s, th);
  });
  return summarize(std::move(rows));
}

std::string report_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "scenario,class,f_in,f_selected,f_default,f_exhaustive,protocols\n";
  for (const BenchRow& row : report.rows) {
    out << row.scenario << ',' << outcome_name(row.outcome) << ',' << format_double(row.f_in)
        << ',' << format_double(row.f_selected) << ',' << format_double(row.f_default) << ','
        << format_double(row.f_exhaustive) << ',' << join(row.protocols) << '\n';
  }
  return out.str();
}

std::string summary_line(const BenchReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "trials=%zu p_failure=%.4f p_success=%.4f p_nan=%.4f p_optimal=%.4f "
                "delta_f_max=%.6f delta_f_mean=%.6f sum=%.4f",
                r.rows.size(), r.p_failure, r.p_success, r.p_nan, r.p_optimal, r.delta_f_max,
                r.delta_f_mean, r.p_failure + r.p_success + r.p_nan);
  return buf;
}

}  // namespace eppsel
