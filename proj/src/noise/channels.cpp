#include <cmath>
#include <limits>
#include <string>

#include "eppsel/errors.hpp"
#include "eppsel/noise.hpp"

namespace eppsel {

namespace {

Matrix pauli(int which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case 0: m(0, 0) = 1; m(1, 1) = 1; break;
    case 1: m(0, 1) = 1; m(1, 0) = 1; break;
    case 2: m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    default: m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace

double lambda_amplitude(double t, double t1) {
  if (!(t1 > 0.0)) throw DomainError("T1 must be positive");
  if (t < 0.0) throw DomainError("time must be non-negative");
  return -std::expm1(-t / t1);
}

double dephasing_time(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("T1 and T2 must be positive");
  if (t2 > 2.0 * t1) {
    throw PhysicalityError("T2 = " + std::to_string(t2) + " exceeds 2*T1 = " +
                           std::to_string(2.0 * t1));
  }
  if (t2 == 2.0 * t1) return std::numeric_limits<double>::infinity();
  return t1 * t2 / (2.0 * t1 - t2);
}

double lambda_phase(double t, double t1, double t2) {
  if (t < 0.0) throw DomainError("time must be non-negative");
  const double tphi = dephasing_time(t1, t2);
  if (std::isinf(tphi)) return 0.0;
  return -std::expm1(-t / tphi);
}

QuantumChannel depolarizing_channel(double p) {
  check_probability(p, "depolarizing probability");
  std::vector<Matrix> ks;
  ks.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * pauli(0));
  for (int k = 1; k < 4; ++k) ks.push_back(std::sqrt(p / 4.0) * pauli(k));
  return QuantumChannel(std::move(ks));
}

QuantumChannel two_qubit_depolarizing_channel(double p) {
  check_probability(p, "depolarizing probability");
  std::vector<Matrix> ks;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double w = (a == 0 && b == 0) ? 1.0 - 15.0 * p / 16.0 : p / 16.0;
      const Matrix pa = pauli(a), pb = pauli(b);
      Matrix k(4, 4);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = std::sqrt(w) * pa(i, j) * pb;
      }
      ks.push_back(std::move(k));
    }
  }
  return QuantumChannel(std::move(ks));
}

QuantumChannel amplitude_damping_channel(double lambda) {
  check_probability(lambda, "amplitude damping rate");
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - lambda);
  e1(0, 1) = std::sqrt(lambda);
  return QuantumChannel({e0, e1});
}

QuantumChannel phase_damping_channel(double lambda) {
  check_probability(lambda, "phase damping rate");
  return QuantumChannel({std::sqrt(1.0 - lambda / 2.0) * pauli(0),
                         std::sqrt(lambda / 2.0) * pauli(3)});
}

QuantumChannel thermal_relaxation_channel(double t, double t1, double t2) {
  const double la = lambda_amplitude(t, t1);
  const double lp = lambda_phase(t, t1, t2);
  if (lp == 0.0) return amplitude_damping_channel(la);
  return amplitude_damping_channel(la).then(phase_damping_channel(lp));
}

QuantumChannel reset_channel(double p) {
  check_probability(p, "reset error");
  return QuantumChannel(reset_kraus(p));
}

double process_fidelity(const QuantumChannel& channel) {
  const double d = static_cast<double>(channel.kraus_ops().front().rows());
  double acc = 0.0;
  for (const Matrix& e : channel.kraus_ops()) acc += std::norm(e.trace());
  return acc / (d * d);
}

double gate_error_rate(const QuantumChannel& channel) {
  const double d = static_cast<double>(channel.kraus_ops().front().rows());
  return 1.0 - (d * process_fidelity(channel) + 1.0) / (d + 1.0);
}

}  // namespace eppsel
