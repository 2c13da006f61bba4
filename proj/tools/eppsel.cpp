// Command-line front end: select, sweep, bench, simulate, catalog.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eppsel/bench.hpp"
#include "eppsel/errors.hpp"

namespace {

using namespace eppsel;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoProtocol = 2;

struct ThresholdFlags {
  Thresholds th;
  std::string polarity = "inverted";
  std::string v3_mode = "any";

  void add(CLI::App* cmd) {
    cmd->add_option("--v1", th.v1, "error level above which rounds > 2 are pruned");
    cmd->add_option("--v2", th.v2, "error level below which BBPSSW is pruned");
    cmd->add_option("--v3", th.v3, "error level above which EXPEDIENT is pruned");
    cmd->add_option("--fb", th.f_b, "fidelity boundary used for sorting");
    cmd->add_option("--sort-polarity", polarity, "inverted or literal")
        ->check(CLI::IsMember({"inverted", "literal"}));
    cmd->add_option("--v3-mode", v3_mode, "any or non-idling")
        ->check(CLI::IsMember({"any", "non-idling"}));
  }

  Thresholds resolve() const {
    Thresholds t = th;
    t.polarity = polarity == "literal" ? SortPolarity::Literal : SortPolarity::Inverted;
    t.v3_mode = v3_mode == "non-idling" ? V3Mode::NonIdling : V3Mode::AnyError;
    validate(t);
    return t;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
  if (!out) throw DomainError("failed writing " + path);
}

DeviceConfig load_config(const std::string& path) {
  std::vector<std::string> warnings;
  DeviceConfig c = load_device_config_file(path, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
  return c;
}

std::pair<int, int> parse_grid(const std::string& text) {
  int a = 0, b = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> a >> x >> b) || (x != 'x' && x != 'X') || a < 1 || b < 1 || !in.eof()) {
    throw DomainError("grid must look like 25x25");
  }
  return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement purification protocol selection"};
  app.require_subcommand(1);

  // select
  SelectionRequest req;
  req.f_in = 0.9;
  req.tau = 10e-9;
  req.throughput_n = 10;
  req.buffer_size = 10;
  req.t_qos = 5e-6;
  req.f_out_target = 0.95;
  std::string config_path, out_path;
  ThresholdFlags select_th;
  CLI::App* sel = app.add_subcommand("select", "choose purification protocols for a request");
  sel->add_option("--config", config_path, "device configuration JSON")->required();
  sel->add_option("--f-in", req.f_in, "raw EP fidelity");
  sel->add_option("--tau", req.tau, "EP generation cycle in seconds");
  sel->add_option("--n", req.throughput_n, "EPs per generation cycle");
  sel->add_option("--buffer", req.buffer_size, "qubits available for purification");
  sel->add_option("--t-qos", req.t_qos, "time budget in seconds");
  sel->add_option("--f-out", req.f_out_target, "target fidelity");
  sel->add_option("--out", out_path, "write request and result JSON here");
  select_th.add(sel);

  // sweep
  std::string kind = "depolarizing", grid = "25x25", sweep_out;
  int jobs = 0;
  CLI::App* sw = app.add_subcommand("sweep", "phase diagram over input fidelity and one error");
  sw->add_option("--kind", kind, "depolarizing, amplitude_damping, phase_damping or idling");
  sw->add_option("--grid", grid, "fidelity points x error points");
  sw->add_option("--out", sweep_out, "CSV path (stdout when omitted)");
  sw->add_option("--jobs", jobs, "worker threads (0: all cores)");

  // bench
  std::string group = "2", bench_out;
  std::string ranges_path = EPPSEL_FIXTURE_DIR "/sampling_ranges.json";
  std::string fixtures_dir = EPPSEL_FIXTURE_DIR "/devices";
  int trials = 100;
  std::uint64_t seed = 1;
  ThresholdFlags bench_th;
  CLI::App* be = app.add_subcommand("bench", "compare selector, default and exhaustive search");
  be->add_option("--group", group, "1, 2, 3, random_better, random_current, random_worse, device_fixture");
  be->add_option("--trials", trials, "scenarios to sample");
  be->add_option("--seed", seed, "sampling seed");
  be->add_option("--out", bench_out, "CSV path (stdout when omitted)");
  be->add_option("--jobs", jobs, "worker threads (0: all cores)");
  be->add_option("--ranges", ranges_path, "sampling range file");
  be->add_option("--fixtures", fixtures_dir, "device fixture directory");
  bench_th.add(be);

  // simulate
  std::string protocol_id = "bbpssw-1", sim_config;
  double sim_f = 0.9, sim_tau = 0.0;
  int sim_n = 1;
  bool listing = false;
  CLI::App* sim = app.add_subcommand("simulate", "run one protocol once");
  sim->add_option("--protocol", protocol_id, "protocol id from the catalog");
  sim->add_option("--config", sim_config, "device configuration JSON (noiseless when omitted)");
  sim->add_option("--f-in", sim_f, "raw EP fidelity");
  sim->add_option("--tau", sim_tau, "EP generation cycle in seconds");
  sim->add_option("--n", sim_n, "EPs per generation cycle");
  sim->add_flag("--listing", listing, "print the timed circuit");

  // catalog
  bool catalog_json_out = false;
  CLI::App* cat = app.add_subcommand("catalog", "list known protocols");
  cat->add_flag("--json", catalog_json_out, "print JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sel) {
      req.config = load_config(config_path);
      const Thresholds th = select_th.resolve();
      const NoiseModel noise = build_noise_model(req.config);
      const SelectionResult r = select(req, th, noise);
      std::cout << describe(r, req.f_in);
      if (!out_path.empty()) {
        nlohmann::json doc{{"request", to_json(req)}, {"result", to_json(r)}};
        write_text(out_path, doc.dump(2) + "\n");
      }
      return r.reason == kNoQualifyingProtocol ? kExitNoProtocol : kExitOk;
    }
    if (*sw) {
      const SweepKind k = parse_sweep_kind(kind);
      const auto [nf, ne] = parse_grid(grid);
      const PhaseGrid g = sweep_phase_diagram(k, default_f_axis(nf), default_error_axis(k, ne), jobs);
      write_text(sweep_out, grid_csv(g));
      return kExitOk;
    }
    if (*be) {
      const Group gr = parse_group(group);
      const Thresholds th = bench_th.resolve();
      const BenchReport rep =
          gr == Group::DeviceFixture
              ? run_device_benchmark(load_device_fixtures(fixtures_dir), th, jobs)
              : run_benchmark(gr, trials, seed, load_sampling_ranges_file(ranges_path), th, jobs);
      write_text(bench_out, report_csv(rep));
      std::cout << summary_line(rep) << '\n';
      return kExitOk;
    }
    if (*sim) {
      const ProtocolSpec& spec = find_protocol(protocol_id);
      const NoiseModel noise =
          sim_config.empty() ? NoiseModel::noiseless() : build_noise_model(load_config(sim_config));
      const EPSource src{sim_tau, sim_n};
      const PurifyOutcome r = run_protocol(sim_f, spec, noise, src);
      if (listing) {
        const double delay = noise.is_noiseless() ? 0.0 : calibrate_delay_for_fidelity(sim_f, noise);
        const DeviceConfig* cfg = noise.is_noiseless() ? nullptr : &noise.config();
        std::cout << build_protocol_circuit(spec, src, delay, cfg).listing();
      }
      std::printf("protocol %s\nf_in %.10f\nf_out %.10f\nsuccess_prob %.10f\nduration_s %.6e\n",
                  spec.id.c_str(), sim_f, r.f_out, r.success_prob, r.duration);
      return kExitOk;
    }
    if (*cat) {
      if (catalog_json_out) {
        std::cout << catalog_json().dump(2) << '\n';
      } else {
        std::printf("%-13s %-18s %6s %5s %13s %9s\n", "id", "label", "rounds", "reuse",
                    "qubits_needed", "ep_demand");
        for (const ProtocolSpec& s : protocol_registry()) {
          std::printf("%-13s %-18s %6d %5s %13d %9d\n", s.id.c_str(), s.label().c_str(), s.rounds,
                      s.reuse ? "yes" : "no", s.qubits_needed, s.ep_demand);
        }
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
