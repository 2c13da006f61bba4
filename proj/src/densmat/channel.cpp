#include <cmath>
#include <string>

#include "eppsel/densmat.hpp"
#include "eppsel/errors.hpp"

namespace eppsel {

double completeness_defect(const std::vector<Matrix>& kraus_ops) {
  if (kraus_ops.empty()) return 1.0;
  const Eigen::Index d = kraus_ops.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& e : kraus_ops) sum += e.adjoint() * e;
  return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus_ops)
    : kraus_(std::move(kraus_ops)) {
  if (kraus_.empty()) throw ChannelError("channel needs at least one Kraus operator");
  const Eigen::Index d = kraus_.front().rows();
  if (d == 2) {
    arity_ = 1;
  } else if (d == 4) {
    arity_ = 2;
  } else {
    throw ChannelError("channels act on one or two qubits");
  }
  for (const Matrix& e : kraus_) {
    if (e.rows() != d || e.cols() != d) {
      throw ChannelError("Kraus operators must share one square dimension");
    }
  }
  const double defect = eppsel::completeness_defect(kraus_);
  if (defect > 1e-12) {
    throw ChannelError("Kraus set is not complete (defect " +
                       std::to_string(defect) + ")");
  }
}

QuantumChannel QuantumChannel::identity(int arity) {
  if (arity != 1 && arity != 2) throw ChannelError("arity must be 1 or 2");
  const Eigen::Index d = Eigen::Index{1} << arity;
  return QuantumChannel({Matrix::Identity(d, d)});
}

double QuantumChannel::completeness_defect() const {
  return eppsel::completeness_defect(kraus_);
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next) const {
  if (next.arity_ != arity_) throw ChannelError("cannot compose channels of different arity");
  std::vector<Matrix> ks;
  ks.reserve(kraus_.size() * next.kraus_.size());
  for (const Matrix& b : next.kraus_) {
    for (const Matrix& a : kraus_) ks.push_back(b * a);
  }
  return QuantumChannel(std::move(ks));
}

QuantumChannel QuantumChannel::kron(const QuantumChannel& other) const {
  if (arity_ + other.arity_ > 2) throw ChannelError("product channel wider than two qubits");
  std::vector<Matrix> ks;
  for (const Matrix& a : kraus_) {
    for (const Matrix& b : other.kraus_) {
      Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
          m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
      }
      ks.push_back(std::move(m));
    }
  }
  return QuantumChannel(std::move(ks));
}

QuantumChannel werner_twirl_channel() {
  static const QuantumChannel twirl = [] {
    Matrix H(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    H << s, s, s, -s;
    const Matrix cyc = gate_matrix(GateKind::S) * H;  // X -> Z -> Y -> X
    Matrix paulis[4];
    paulis[0] = Matrix::Identity(2, 2);
    paulis[1] = gate_matrix(GateKind::X);
    paulis[2] = Matrix(2, 2);
    paulis[2] << 0, Complex(0, -1), Complex(0, 1), 0;
    paulis[3] = Matrix(2, 2);
    paulis[3] << 1, 0, 0, -1;
    std::vector<Matrix> ks;
    Matrix c = Matrix::Identity(2, 2);
    const double w = 1.0 / std::sqrt(12.0);
    for (int ci = 0; ci < 3; ++ci) {
      for (const Matrix& p : paulis) {
        const Matrix u = c * p;
        const Matrix uc = u.conjugate();
        Matrix k(4, 4);
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = w * u(i, j) * uc;
        }
        ks.push_back(std::move(k));
      }
      c = cyc * c;
    }
    return QuantumChannel(std::move(ks));
  }();
  return twirl;
}

}  // namespace eppsel
