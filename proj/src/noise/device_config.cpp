#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "eppsel/errors.hpp"
#include "eppsel/noise.hpp"

namespace eppsel {

using nlohmann::json;

namespace {

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw SchemaError("missing field '" + std::string(key) + "' in " + where);
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw SchemaError("field '" + std::string(key) + "' in " + where + " must be a number");
  }
  return v.get<double>();
}

void warn_unknown(const json& obj, const std::set<std::string>& known, const std::string& where,
                  std::vector<std::string>* warnings) {
  if (!warnings) return;
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) warnings->push_back("ignoring unknown key '" + key + "' in " + where);
  }
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw SchemaError(what + " must lie in [0, 1]");
}

void check_duration(double t, const std::string& what) {
  if (!(t >= 0.0)) throw SchemaError(what + " must be non-negative");
}

}  // namespace

GateProperties DeviceConfig::gate(const std::string& gate_name,
                                  const std::vector<int>& on) const {
  for (const GateProperties& g : gates) {
    if (g.name == gate_name && g.qubits == on) return g;
  }
  if (on.size() == 2) {
    const std::vector<int> rev{on[1], on[0]};
    for (const GateProperties& g : gates) {
      if (g.name == gate_name && g.qubits == rev) return g;
    }
  }
  GateProperties mean{gate_name, on, 0.0, 0.0};
  int count = 0;
  for (const GateProperties& g : gates) {
    if (g.name == gate_name) {
      mean.gate_error += g.gate_error;
      mean.gate_length += g.gate_length;
      ++count;
    }
  }
  if (count > 0) {
    mean.gate_error /= count;
    mean.gate_length /= count;
  }
  return mean;
}

void validate(const DeviceConfig& config) {
  if (config.qubits.empty()) throw SchemaError("device has no qubits");
  for (std::size_t q = 0; q < config.qubits.size(); ++q) {
    const QubitProperties& p = config.qubits[q];
    const std::string where = "qubit " + std::to_string(q);
    if (!(p.t1 > 0.0)) throw SchemaError(where + ": t1 must be positive");
    if (!(p.t2 > 0.0)) throw SchemaError(where + ": t2 must be positive");
    if (p.t2 > 2.0 * p.t1) {
      throw PhysicalityError(where + ": t2 = " + std::to_string(p.t2) +
                             " exceeds 2*t1 = " + std::to_string(2.0 * p.t1));
    }
    check_duration(p.readout_length, where + ": readout_length");
    check_probability(p.prob_meas0_prep1, where + ": prob_meas0_prep1");
    check_probability(p.prob_meas1_prep0, where + ": prob_meas1_prep0");
  }
  for (const GateProperties& g : config.gates) {
    const std::string where = "gate '" + g.name + "'";
    if (g.qubits.empty() || g.qubits.size() > 2) {
      throw SchemaError(where + ": qubits must name one or two qubits");
    }
    for (int q : g.qubits) {
      if (q < 0 || q >= config.num_qubits()) {
        throw SchemaError(where + ": qubit " + std::to_string(q) + " out of range");
      }
    }
    check_probability(g.gate_error, where + ": gate_error");
    check_duration(g.gate_length, where + ": gate_length");
  }
  for (const auto& [a, b] : config.coupling_map) {
    if (a < 0 || b < 0 || a >= config.num_qubits() || b >= config.num_qubits()) {
      throw SchemaError("coupling_map entry out of range");
    }
  }
}

DeviceConfig load_device_config(const json& doc, std::vector<std::string>* warnings) {
  if (!doc.is_object()) throw SchemaError("device document must be an object");
  warn_unknown(doc, {"name", "qubits", "gates", "coupling_map", "description"}, "document",
               warnings);
  DeviceConfig config;
  if (doc.contains("name")) config.name = doc.at("name").get<std::string>();
  if (!doc.contains("qubits")) throw SchemaError("missing field 'qubits'");
  if (!doc.at("qubits").is_array()) throw SchemaError("field 'qubits' must be an array");
  std::size_t index = 0;
  for (const json& q : doc.at("qubits")) {
    const std::string where = "qubits[" + std::to_string(index++) + "]";
    if (!q.is_object()) throw SchemaError(where + " must be an object");
    warn_unknown(q, {"t1", "t2", "readout_length", "prob_meas0_prep1", "prob_meas1_prep0"},
                 where, warnings);
    QubitProperties p;
    p.t1 = number_field(q, "t1", where);
    p.t2 = number_field(q, "t2", where);
    p.readout_length = number_field(q, "readout_length", where);
    p.prob_meas0_prep1 = number_field(q, "prob_meas0_prep1", where);
    p.prob_meas1_prep0 = number_field(q, "prob_meas1_prep0", where);
    config.qubits.push_back(p);
  }
  if (!doc.contains("gates")) throw SchemaError("missing field 'gates'");
  if (!doc.at("gates").is_array()) throw SchemaError("field 'gates' must be an array");
  index = 0;
  for (const json& g : doc.at("gates")) {
    const std::string where = "gates[" + std::to_string(index++) + "]";
    if (!g.is_object()) throw SchemaError(where + " must be an object");
    warn_unknown(g, {"name", "qubits", "gate_error", "gate_length"}, where, warnings);
    GateProperties gp;
    if (!g.contains("name") || !g.at("name").is_string()) {
      throw SchemaError("missing field 'name' in " + where);
    }
    gp.name = g.at("name").get<std::string>();
    if (!g.contains("qubits") || !g.at("qubits").is_array()) {
      throw SchemaError("missing field 'qubits' in " + where);
    }
    gp.qubits = g.at("qubits").get<std::vector<int>>();
    gp.gate_error = number_field(g, "gate_error", where);
    gp.gate_length = number_field(g, "gate_length", where);
    config.gates.push_back(gp);
  }
  if (doc.contains("coupling_map")) {
    for (const json& edge : doc.at("coupling_map")) {
      if (!edge.is_array() || edge.size() != 2) {
        throw SchemaError("coupling_map entries must be [i, j] pairs");
      }
      config.coupling_map.emplace_back(edge[0].get<int>(), edge[1].get<int>());
    }
  }
  validate(config);
  return config;
}

DeviceConfig load_device_config_file(const std::filesystem::path& path,
                                     std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open device config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("cannot parse " + path.string() + ": " + e.what());
  }
  return load_device_config(doc, warnings);
}

json to_json(const DeviceConfig& config) {
  json doc;
  doc["name"] = config.name;
  doc["qubits"] = json::array();
  for (const QubitProperties& q : config.qubits) {
    doc["qubits"].push_back({{"t1", q.t1},
                             {"t2", q.t2},
                             {"readout_length", q.readout_length},
                             {"prob_meas0_prep1", q.prob_meas0_prep1},
                             {"prob_meas1_prep0", q.prob_meas1_prep0}});
  }
  doc["gates"] = json::array();
  for (const GateProperties& g : config.gates) {
    doc["gates"].push_back({{"name", g.name},
                            {"qubits", g.qubits},
                            {"gate_error", g.gate_error},
                            {"gate_length", g.gate_length}});
  }
  doc["coupling_map"] = json::array();
  for (const auto& [a, b] : config.coupling_map) doc["coupling_map"].push_back({a, b});
  return doc;
}

}  // namespace eppsel
