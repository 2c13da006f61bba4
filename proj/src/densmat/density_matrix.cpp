#include "eppsel/densmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "eppsel/errors.hpp"

namespace eppsel {

namespace {

int log2_exact(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw DomainError("matrix dimension " + std::to_string(dim) +
                      " is not a power of two");
  }
  return n;
}

std::size_t bit_of(int qubit, int n) {
  return std::size_t{1} << (n - 1 - qubit);
}

void check_targets(std::span<const int> targets, int n) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n) {
      throw IndexError("qubit index " + std::to_string(targets[i]) +
                       " out of range for " + std::to_string(n) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw IndexError("repeated qubit index " + std::to_string(targets[i]));
      }
    }
  }
}

// m <- U_embedded * m, U acting on `targets` (targets[0] is U's MSB).
void left_apply(Matrix& m, const Matrix& u, std::span<const int> targets,
                int n) {
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::size_t> offs(sub, 0);
  std::size_t mask = 0;
  for (std::size_t t = 0; t < k; ++t) mask |= bit_of(targets[t], n);
  for (std::size_t j = 0; j < sub; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << (k - 1 - t))) offs[j] |= bit_of(targets[t], n);
    }
  }
  std::vector<Complex> in(sub), out(sub);
  for (std::size_t col = 0; col < dim; ++col) {
    Complex* column = m.data() + col * dim;
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & mask) continue;
      for (std::size_t j = 0; j < sub; ++j) in[j] = column[base | offs[j]];
      for (std::size_t i = 0; i < sub; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < sub; ++j) acc += u(i, j) * in[j];
        out[i] = acc;
      }
      for (std::size_t i = 0; i < sub; ++i) column[base | offs[i]] = out[i];
    }
  }
}

Matrix conjugate_by(const Matrix& rho, const Matrix& u,
                    std::span<const int> targets, int n) {
  Matrix tmp = rho;
  left_apply(tmp, u, targets, n);
  Matrix back = tmp.adjoint();
  left_apply(back, u, targets, n);
  return back.adjoint();
}

const Matrix& bell_vectors() {
  static const Matrix vecs = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix v = Matrix::Zero(4, 4);
    v(0, 0) = s;  v(3, 0) = s;   // phi+
    v(0, 1) = s;  v(3, 1) = -s;  // phi-
    v(1, 2) = s;  v(2, 2) = s;   // psi+
    v(1, 3) = s;  v(2, 3) = -s;  // psi-
    return v;
  }();
  return vecs;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix data, int cap) : data_(std::move(data)) {
  if (data_.rows() != data_.cols() || data_.rows() < 1) {
    throw DomainError("density matrix must be square and non-empty");
  }
  num_qubits_ = log2_exact(data_.rows());
  if (num_qubits_ > cap) {
    throw CapacityError("state of " + std::to_string(num_qubits_) +
                        " qubits exceeds the cap of " + std::to_string(cap));
  }
  trace_weight_ = data_.trace().real();
}

double DensityMatrix::hermiticity_defect() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Matrix h = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::normalized() const {
  if (trace_weight_ <= 0.0) throw DomainError("cannot normalize zero-trace state");
  return DensityMatrix(data_ / trace_weight_, num_qubits_);
}

DensityMatrix new_ground_state(int num_qubits, int cap) {
  if (num_qubits < 1) throw DomainError("need at least one qubit");
  if (num_qubits > cap) {
    throw CapacityError("requested " + std::to_string(num_qubits) +
                        " qubits; the cap is " + std::to_string(cap));
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Matrix m = Matrix::Zero(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), cap);
}

DensityMatrix make_bell_state(int which) {
  if (which < 0 || which > 3) throw DomainError("Bell index must be 0..3");
  const auto v = bell_vectors().col(which);
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix make_bell_diagonal(double a, double b, double c, double d) {
  if (a < 0 || b < 0 || c < 0 || d < 0) {
    throw DomainError("Bell-diagonal coefficients must be non-negative");
  }
  if (std::abs(a + b + c + d - 1.0) > 1e-12) {
    throw DomainError("Bell-diagonal coefficients must sum to 1");
  }
  const Matrix& v = bell_vectors();
  Eigen::VectorXcd w(4);
  w << a, b, c, d;
  return DensityMatrix(v * w.asDiagonal() * v.adjoint());
}

DensityMatrix make_werner(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) {
    throw DomainError("Werner fidelity must lie in [0.25, 1]");
  }
  const double t = (1.0 - fidelity) / 3.0;
  return make_bell_diagonal(fidelity, t, t, 1.0 - fidelity - 2.0 * t);
}

std::array<double, 4> bell_coefficients(const DensityMatrix& two_qubit) {
  if (two_qubit.num_qubits() != 2) throw DomainError("expected a two-qubit state");
  const Matrix& v = bell_vectors();
  Matrix in_bell = v.adjoint() * two_qubit.data() * v;
  return {in_bell(0, 0).real(), in_bell(1, 1).real(), in_bell(2, 2).real(),
          in_bell(3, 3).real()};
}

DensityMatrix apply_operator(const DensityMatrix& state, const Matrix& u,
                             std::span<const int> targets) {
  const int n = state.num_qubits();
  check_targets(targets, n);
  if (u.rows() != (Eigen::Index{1} << targets.size()) || u.cols() != u.rows()) {
    throw DomainError("operator dimension does not match target count");
  }
  return DensityMatrix(conjugate_by(state.data(), u, targets, n), n);
}

DensityMatrix apply_unitary(const DensityMatrix& state, const GateOp& gate) {
  if (!is_unitary(gate.kind)) {
    throw DomainError("gate " + gate_name(gate.kind) + " is not unitary");
  }
  if (static_cast<int>(gate.targets.size()) != gate_arity(gate.kind)) {
    throw DomainError("gate " + gate_name(gate.kind) + " has wrong target count");
  }
  return apply_operator(state, gate_matrix(gate.kind, gate.param), gate.targets);
}

DensityMatrix apply_channel(const DensityMatrix& state,
                            const QuantumChannel& channel,
                            std::span<const int> targets) {
  const int n = state.num_qubits();
  check_targets(targets, n);
  if (static_cast<int>(targets.size()) != channel.arity()) {
    throw DomainError("channel arity does not match target count");
  }
  // Superoperator S[(i,j),(a,b)] = sum_k E_ia conj(E_jb), applied to every
  // sub x sub block of the targets.
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  Matrix sop = Matrix::Zero(sub * sub, sub * sub);
  for (const Matrix& e : channel.kraus_ops()) {
    for (std::size_t i = 0; i < sub; ++i)
      for (std::size_t j = 0; j < sub; ++j)
        for (std::size_t a = 0; a < sub; ++a)
          for (std::size_t b = 0; b < sub; ++b)
            sop(i * sub + j, a * sub + b) += e(i, a) * std::conj(e(j, b));
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::size_t> offs(sub, 0);
  std::size_t mask = 0;
  for (std::size_t t = 0; t < k; ++t) mask |= bit_of(targets[t], n);
  for (std::size_t j = 0; j < sub; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << (k - 1 - t))) offs[j] |= bit_of(targets[t], n);
    }
  }
  std::vector<std::size_t> bases;
  for (std::size_t b = 0; b < dim; ++b) {
    if (!(b & mask)) bases.push_back(b);
  }
  Matrix out(state.dim(), state.dim());
  const Matrix& m = state.data();
  std::vector<Complex> in(sub * sub), res(sub * sub);
  for (std::size_t cb : bases) {
    for (std::size_t rb : bases) {
      for (std::size_t a = 0; a < sub; ++a)
        for (std::size_t b = 0; b < sub; ++b) in[a * sub + b] = m(rb | offs[a], cb | offs[b]);
      for (std::size_t r = 0; r < sub * sub; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < sub * sub; ++c) acc += sop(r, c) * in[c];
        res[r] = acc;
      }
      for (std::size_t a = 0; a < sub; ++a)
        for (std::size_t b = 0; b < sub; ++b) out(rb | offs[a], cb | offs[b]) = res[a * sub + b];
    }
  }
  return DensityMatrix(std::move(out), n);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, int cap) {
  const int n = a.num_qubits() + b.num_qubits();
  if (n > cap) {
    throw CapacityError("tensor product of " + std::to_string(n) +
                        " qubits exceeds the cap of " + std::to_string(cap));
  }
  const Eigen::Index da = a.dim(), db = b.dim();
  Matrix m(da * db, da * db);
  for (Eigen::Index j = 0; j < da; ++j) {
    for (Eigen::Index i = 0; i < da; ++i) {
      m.block(i * db, j * db, db, db) = a.data()(i, j) * b.data();
    }
  }
  return DensityMatrix(std::move(m), cap);
}

DensityMatrix partial_trace(const DensityMatrix& state,
                            std::span<const int> discard) {
  const int n = state.num_qubits();
  check_targets(discard, n);
  if (discard.empty()) throw DomainError("nothing to trace out");
  if (static_cast<int>(discard.size()) >= n) {
    throw DomainError("cannot trace out every qubit");
  }
  std::vector<int> keep;
  for (int q = 0; q < n; ++q) {
    if (std::find(discard.begin(), discard.end(), q) == discard.end()) {
      keep.push_back(q);
    }
  }
  const std::size_t dk = std::size_t{1} << keep.size();
  const std::size_t dd = std::size_t{1} << discard.size();
  auto full_index = [&](std::size_t r, std::size_t d) {
    std::size_t idx = 0;
    for (std::size_t t = 0; t < keep.size(); ++t) {
      if (r & (std::size_t{1} << (keep.size() - 1 - t))) idx |= bit_of(keep[t], n);
    }
    for (std::size_t t = 0; t < discard.size(); ++t) {
      if (d & (std::size_t{1} << (discard.size() - 1 - t))) idx |= bit_of(discard[t], n);
    }
    return idx;
  };
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = state.data();
  for (std::size_t d = 0; d < dd; ++d) {
    std::vector<std::size_t> rows(dk);
    for (std::size_t r = 0; r < dk; ++r) rows[r] = full_index(r, d);
    for (std::size_t c = 0; c < dk; ++c) {
      for (std::size_t r = 0; r < dk; ++r) out(r, c) += m(rows[r], rows[c]);
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix permute_qubits(const DensityMatrix& state,
                             std::span<const int> order) {
  const int n = state.num_qubits();
  if (static_cast<int>(order.size()) != n) {
    throw DomainError("permutation must name every qubit");
  }
  check_targets(order, n);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::size_t> map(dim);
  for (std::size_t ni = 0; ni < dim; ++ni) {
    std::size_t oi = 0;
    for (int q = 0; q < n; ++q) {
      if (ni & bit_of(q, n)) oi |= bit_of(order[q], n);
    }
    map[ni] = oi;
  }
  Matrix out(dim, dim);
  const Matrix& m = state.data();
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) out(r, c) = m(map[r], map[c]);
  }
  return DensityMatrix(std::move(out), n);
}

double fidelity_to_bell(const DensityMatrix& state, std::pair<int, int> pair) {
  const int n = state.num_qubits();
  const int qa = pair.first, qb = pair.second;
  if (qa == qb) throw DomainError("fidelity pair indices must differ");
  const int both[2] = {qa, qb};
  check_targets(both, n);
  const std::size_t ba = bit_of(qa, n), bb = bit_of(qb, n);
  const std::size_t dim = std::size_t{1} << n;
  const Matrix& m = state.data();
  double acc = 0.0;
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (ba | bb)) continue;
    const std::size_t i00 = base, i11 = base | ba | bb;
    acc += (m(i00, i00) + m(i00, i11) + m(i11, i00) + m(i11, i11)).real();
  }
  return 0.5 * acc / state.trace_weight();
}

Matrix coincidence_block(const DensityMatrix& state,
                         std::span<const std::pair<int, int>> pairs,
                         std::span<const Confusion> confusion) {
  const int n = state.num_qubits();
  std::vector<int> measured;
  for (const auto& [a, b] : pairs) {
    measured.push_back(a);
    measured.push_back(b);
  }
  check_targets(measured, n);
  if (!confusion.empty() && static_cast<int>(confusion.size()) != n) {
    throw DomainError("confusion table must have one entry per qubit");
  }
  for (const Confusion& c : confusion) {
    if (c.p01 < 0 || c.p01 > 1 || c.p10 < 0 || c.p10 > 1) {
      throw DomainError("confusion probabilities must lie in [0, 1]");
    }
  }
  std::vector<int> keep;
  for (int q = 0; q < n; ++q) {
    if (std::find(measured.begin(), measured.end(), q) == measured.end()) {
      keep.push_back(q);
    }
  }
  // P(read r | state s) for each measured qubit.
  auto readout = [&](int q, int s, int r) {
    const Confusion c = confusion.empty() ? Confusion{} : confusion[q];
    if (s == 0) return r == 0 ? 1.0 - c.p01 : c.p01;
    return r == 0 ? c.p10 : 1.0 - c.p10;
  };
  const std::size_t dk = std::size_t{1} << keep.size();
  const std::size_t dm = std::size_t{1} << measured.size();
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = state.data();
  std::vector<std::size_t> rows(dk);
  for (std::size_t pattern = 0; pattern < dm; ++pattern) {
    double w = 1.0;
    std::size_t mbits = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const int sa = (pattern >> (measured.size() - 1 - 2 * p)) & 1;
      const int sb = (pattern >> (measured.size() - 2 - 2 * p)) & 1;
      const int qa = measured[2 * p], qb = measured[2 * p + 1];
      w *= readout(qa, sa, 0) * readout(qb, sb, 0) +
           readout(qa, sa, 1) * readout(qb, sb, 1);
      if (sa) mbits |= bit_of(qa, n);
      if (sb) mbits |= bit_of(qb, n);
    }
    if (w == 0.0) continue;
    for (std::size_t r = 0; r < dk; ++r) {
      std::size_t idx = mbits;
      for (std::size_t t = 0; t < keep.size(); ++t) {
        if (r & (std::size_t{1} << (keep.size() - 1 - t))) idx |= bit_of(keep[t], n);
      }
      rows[r] = idx;
    }
    for (std::size_t c = 0; c < dk; ++c) {
      for (std::size_t r = 0; r < dk; ++r) out(r, c) += w * m(rows[r], rows[c]);
    }
  }
  return out;
}

PostSelection measure_zz_coincidence(const DensityMatrix& state,
                                     std::span<const std::pair<int, int>> pairs,
                                     std::span<const Confusion> confusion) {
  if (static_cast<int>(2 * pairs.size()) >= state.num_qubits()) {
    throw DomainError("coincidence measurement must leave a qubit unmeasured");
  }
  Matrix block = coincidence_block(state, pairs, confusion);
  const double accepted = block.trace().real();
  const double prob = accepted / state.trace_weight();
  if (!(prob >= 1e-12)) {
    throw DegenerateBranchError("coincidence branch has probability " +
                                std::to_string(prob));
  }
  return {DensityMatrix(block / accepted), prob};
}

std::vector<Matrix> reset_kraus(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("reset error must lie in [0, 1]");
  const double a = std::sqrt(1.0 - p), b = std::sqrt(p);
  std::vector<Matrix> ks(4, Matrix::Zero(2, 2));
  ks[0](0, 0) = a;
  ks[1](0, 1) = a;
  ks[2](1, 0) = b;
  ks[3](1, 1) = b;
  return ks;
}

DensityMatrix reset_qubits(const DensityMatrix& state,
                           std::span<const int> targets, double reset_error_p) {
  const QuantumChannel reset(reset_kraus(reset_error_p));
  DensityMatrix out = state;
  for (int q : targets) {
    const int t[1] = {q};
    out = apply_channel(out, reset, t);
  }
  return out;
}

}  // namespace eppsel
