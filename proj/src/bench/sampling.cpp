#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "eppsel/bench.hpp"
#include "eppsel/errors.hpp"

namespace eppsel {

namespace {

using nlohmann::json;

// Same stream on every platform: mt19937_64 output mapped to [0, 1).
class Sampler {
 public:
  Sampler(std::uint64_t seed, int group, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(group), static_cast<std::uint32_t>(index)};
    rng_.seed(seq);
  }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(const Range& r) { return r.lo + (r.hi - r.lo) * unit(); }
  int integer(const Range& r) {
    const int lo = static_cast<int>(std::lround(r.lo));
    const int hi = static_cast<int>(std::lround(r.hi));
    return lo + static_cast<int>(unit() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 rng_;
};

Range range_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError("missing field '" + std::string(key) + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw SchemaError("field '" + std::string(key) + "' in " + where + " must be [lo, hi]");
  }
  Range r{v[0].get<double>(), v[1].get<double>()};
  if (!(r.lo <= r.hi)) throw SchemaError("field '" + std::string(key) + "' has lo > hi");
  return r;
}

}  // namespace

std::string group_name(Group group) {
  switch (group) {
    case Group::RandomBetter: return "random_better";
    case Group::RandomCurrent: return "random_current";
    case Group::RandomWorse: return "random_worse";
    case Group::DeviceFixture: return "device_fixture";
  }
  return "?";
}

Group parse_group(const std::string& text) {
  if (text == "1" || text == "random_better" || text == "better") return Group::RandomBetter;
  if (text == "2" || text == "random_current" || text == "current") return Group::RandomCurrent;
  if (text == "3" || text == "random_worse" || text == "worse") return Group::RandomWorse;
  if (text == "4" || text == "device_fixture" || text == "device") return Group::DeviceFixture;
  throw DomainError("unknown group '" + text + "'");
}

SamplingRanges load_sampling_ranges(const json& doc) {
  if (!doc.is_object()) throw SchemaError("range document must be an object");
  if (!doc.contains("current") || !doc.contains("request")) {
    throw SchemaError("range document needs 'current' and 'request' sections");
  }
  const json& d = doc.at("current");
  const json& q = doc.at("request");
  SamplingRanges r;
  r.t1 = range_field(d, "t1", "current");
  r.t2 = range_field(d, "t2", "current");
  r.sx_error = range_field(d, "sx_error", "current");
  r.sx_length = range_field(d, "sx_length", "current");
  r.cx_error = range_field(d, "cx_error", "current");
  r.cx_length = range_field(d, "cx_length", "current");
  r.readout_error = range_field(d, "readout_error", "current");
  r.readout_length = range_field(d, "readout_length", "current");
  r.f_in = range_field(q, "f_in", "request");
  r.f_out_margin = range_field(q, "f_out_margin", "request");
  r.buffer_size = range_field(q, "buffer_size", "request");
  r.t_qos = range_field(q, "t_qos", "request");
  r.tau = range_field(q, "tau", "request");
  r.throughput_n = range_field(q, "throughput_n", "request");
  if (doc.contains("scaling")) {
    const json& s = doc.at("scaling");
    r.better_scale = s.value("random_better", r.better_scale);
    r.worse_scale = s.value("random_worse", r.worse_scale);
  }
  if (r.buffer_size.lo < 4) throw SchemaError("buffer_size range must start at 4 or more");
  if (r.throughput_n.lo < 1) throw SchemaError("throughput_n range must start at 1 or more");
  return r;
}

SamplingRanges load_sampling_ranges_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open range file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return load_sampling_ranges(doc);
}

Scenario sample_scenario(Group group, const SamplingRanges& ranges, std::uint64_t seed,
                         int index) {
  double scale = 1.0;
  switch (group) {
    case Group::RandomBetter: scale = ranges.better_scale; break;
    case Group::RandomCurrent: scale = 1.0; break;
    case Group::RandomWorse: scale = ranges.worse_scale; break;
    case Group::DeviceFixture: throw DomainError("device fixtures are not sampled");
  }
  Sampler s(seed, static_cast<int>(group), index);
  auto prob = [&](const Range& r) { return std::min(1.0, s.uniform(r) * scale); };

  SelectionRequest req;
  req.f_in = s.uniform(ranges.f_in);
  req.f_out_target = std::min(0.999, req.f_in + s.uniform(ranges.f_out_margin));
  req.buffer_size = s.integer(ranges.buffer_size);
  req.t_qos = s.uniform(ranges.t_qos);
  req.tau = s.uniform(ranges.tau);
  req.throughput_n = s.integer(ranges.throughput_n);

  DeviceConfig& c = req.config;
  c.name = group_name(group) + "-" + std::to_string(index);
  const int n = req.buffer_size;
  for (int q = 0; q < n; ++q) {
    QubitProperties p;
    p.t1 = s.uniform(ranges.t1) / scale;
    p.t2 = std::min(s.uniform(ranges.t2) / scale, 2.0 * p.t1);
    p.readout_length = s.uniform(ranges.readout_length);
    p.prob_meas0_prep1 = prob(ranges.readout_error);
    p.prob_meas1_prep0 = prob(ranges.readout_error);
    c.qubits.push_back(p);
    c.gates.push_back({"rz", {q}, 0.0, 0.0});
    const double sx_err = prob(ranges.sx_error);
    const double sx_len = s.uniform(ranges.sx_length);
    c.gates.push_back({"sx", {q}, sx_err, sx_len});
    c.gates.push_back({"x", {q}, sx_err, sx_len});
  }
  // Purification only entangles qubits of the same node (same parity).
  for (int a = 0; a < n; ++a) {
    for (int b = a + 2; b < n; b += 2) {
      const double err = prob(ranges.cx_error);
      const double len = s.uniform(ranges.cx_length);
      c.gates.push_back({"cx", {a, b}, err, len});
      c.gates.push_back({"cx", {b, a}, err, len});
    }
  }
  // EP generation pairs (2s, 2s+1).
  for (int a = 0; a + 1 < n; a += 2) {
    const double err = prob(ranges.cx_error);
    const double len = s.uniform(ranges.cx_length);
    c.gates.push_back({"cx", {a, a + 1}, err, len});
  }
  validate(c);
  return {std::move(req), group, std::to_string(index)};
}

SelectionRequest device_fixture_request(const DeviceConfig& config) {
  SelectionRequest r;
  r.f_in = 0.9;
  r.throughput_n = 10;
  r.buffer_size = 10;
  r.tau = 10e-9;
  r.t_qos = 5e-6;
  r.f_out_target = 0.95;
  r.config = config;
  return r;
}

std::vector<DeviceConfig> load_device_fixtures(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DeviceConfig> out;
  for (const auto& f : files) {
    DeviceConfig c = load_device_config_file(f);
    if (c.name.empty()) c.name = f.stem().string();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace eppsel
