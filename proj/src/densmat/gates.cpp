#include <cmath>

#include "eppsel/densmat.hpp"
#include "eppsel/errors.hpp"

namespace eppsel {

bool is_unitary(GateKind kind) {
  switch (kind) {
    case GateKind::RZ:
    case GateKind::SX:
    case GateKind::X:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::CNOT:
      return true;
    default:
      return false;
  }
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::MeasureZ:
    case GateKind::Twirl:
      return 2;
    default:
      return 1;
  }
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RZ: return "rz";
    case GateKind::SX: return "sx";
    case GateKind::X: return "x";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::CNOT: return "cx";
    case GateKind::Delay: return "delay";
    case GateKind::Reset: return "reset";
    case GateKind::MeasureZ: return "measure";
    case GateKind::Twirl: return "twirl";
  }
  return "?";
}

Matrix gate_matrix(GateKind kind, double param) {
  const Complex i(0.0, 1.0);
  Matrix m;
  switch (kind) {
    case GateKind::RZ:
      m = Matrix::Zero(2, 2);
      m(0, 0) = std::exp(-i * (param / 2.0));
      m(1, 1) = std::exp(i * (param / 2.0));
      return m;
    case GateKind::SX:
      m = Matrix(2, 2);
      m << Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5);
      return m;
    case GateKind::X:
      m = Matrix::Zero(2, 2);
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      return m;
    case GateKind::S:
      m = Matrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = i;
      return m;
    case GateKind::Sdg:
      m = Matrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = -i;
      return m;
    case GateKind::CNOT:
      m = Matrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      m(2, 3) = 1.0;
      m(3, 2) = 1.0;
      return m;
    default:
      throw DomainError("gate " + gate_name(kind) + " has no unitary matrix");
  }
}

}  // namespace eppsel
