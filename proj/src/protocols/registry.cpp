#include <cmath>

#include "eppsel/errors.hpp"
#include "eppsel/protocols.hpp"

namespace eppsel {

std::string family_name(Family family) {
  switch (family) {
    case Family::BBPSSW: return "BBPSSW";
    case Family::DEJMPS: return "DEJMPS";
    case Family::EXPEDIENT: return "EXPEDIENT";
  }
  return "?";
}

std::string ProtocolSpec::label() const {
  std::string s = family_name(family) + "x" + std::to_string(rounds);
  if (reuse) s += " reuse";
  return s;
}

namespace {

ProtocolSpec two_to_one(Family family, int rounds, bool reuse) {
  ProtocolSpec s;
  s.family = family;
  s.rounds = rounds;
  s.reuse = reuse;
  s.ep_demand = 1 << rounds;
  // Reuse keeps one pair per nesting level plus the incoming pair.
  s.qubits_needed = reuse ? 2 * (rounds + 1) : 2 * s.ep_demand;
  s.id = (family == Family::BBPSSW ? "bbpssw-" : "dejmps-") + std::to_string(rounds) +
         (reuse ? "r" : "");
  return s;
}

ProtocolSpec expedient(int rounds) {
  ProtocolSpec s;
  s.family = Family::EXPEDIENT;
  s.rounds = rounds;
  s.reuse = false;
  // Each round consumes four fresh pairs on top of the carried pair.
  s.ep_demand = 1 + 4 * rounds;
  s.qubits_needed = 2 * s.ep_demand;
  s.id = "expedient-" + std::to_string(rounds);
  return s;
}

}  // namespace

const std::vector<ProtocolSpec>& protocol_registry() {
  static const std::vector<ProtocolSpec> registry = [] {
    std::vector<ProtocolSpec> r;
    for (Family f : {Family::BBPSSW, Family::DEJMPS}) {
      for (int rounds = 1; rounds <= 3; ++rounds) {
        r.push_back(two_to_one(f, rounds, false));
        if (rounds >= 2) r.push_back(two_to_one(f, rounds, true));
      }
    }
    r.push_back(expedient(1));
    r.push_back(expedient(2));
    return r;
  }();
  return registry;
}

const ProtocolSpec& find_protocol(std::string_view id) {
  for (const ProtocolSpec& s : protocol_registry()) {
    if (s.id == id) return s;
  }
  throw DomainError("unknown protocol id '" + std::string(id) + "'");
}

nlohmann::json catalog_json() {
  nlohmann::json doc = nlohmann::json::array();
  for (const ProtocolSpec& s : protocol_registry()) {
    doc.push_back({{"id", s.id},
                   {"family", family_name(s.family)},
                   {"rounds", s.rounds},
                   {"reuse", s.reuse},
                   {"qubits_needed", s.qubits_needed},
                   {"ep_demand", s.ep_demand}});
  }
  return doc;
}

double analytic_bbpssw(double f) {
  if (!(f >= 0.25 && f <= 1.0)) throw DomainError("fidelity must lie in [0.25, 1]");
  const double t = (1.0 - f) / 3.0;
  return (f * f + t * t) / (f * f + 2.0 * f * t + 5.0 * t * t);
}

std::pair<double, double> analytic_dejmps(double a, double b, double c, double d) {
  if (a < 0 || b < 0 || c < 0 || d < 0 || std::abs(a + b + c + d - 1.0) > 1e-12) {
    throw DomainError("Bell-diagonal coefficients must be non-negative and sum to 1");
  }
  const double n = (a + b) * (a + b) + (c + d) * (c + d);
  return {(a * a + b * b) / n, n};
}

}  // namespace eppsel
