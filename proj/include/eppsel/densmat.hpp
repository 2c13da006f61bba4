#pragma once

// Dense density-matrix engine.
//
// Qubit 0 is the most significant bit of a computational-basis index, so for
// two qubits |q0 q1> the index is 2*q0 + q1.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace eppsel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultQubitCap = 12;

class DensityMatrix {
 public:
  // Takes ownership of `data`; dimension must be a power of two.
  explicit DensityMatrix(Matrix data, int cap = kDefaultQubitCap);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  const Matrix& data() const { return data_; }
  double trace_weight() const { return trace_weight_; }

  // Largest |data - data^dagger| entry.
  double hermiticity_defect() const;
  // Smallest eigenvalue; O(d^3), meant for tests.
  double min_eigenvalue() const;
  DensityMatrix normalized() const;

 private:
  int num_qubits_;
  Matrix data_;
  double trace_weight_;
};

class QuantumChannel {
 public:
  // Throws ChannelError unless sum_k E_k^dagger E_k = I within 1e-12.
  explicit QuantumChannel(std::vector<Matrix> kraus_ops);

  static QuantumChannel identity(int arity);

  int arity() const { return arity_; }
  const std::vector<Matrix>& kraus_ops() const { return kraus_; }
  double completeness_defect() const;

  // Channel that applies *this first and then `next`.
  QuantumChannel then(const QuantumChannel& next) const;
  // Channel acting as *this on the first qubits and `other` on the rest.
  QuantumChannel kron(const QuantumChannel& other) const;

 private:
  int arity_;
  std::vector<Matrix> kraus_;
};

double completeness_defect(const std::vector<Matrix>& kraus_ops);

enum class GateKind { RZ, SX, X, S, Sdg, CNOT, Delay, Reset, MeasureZ, Twirl };

// Why a Delay was placed; only meaningful for GateKind::Delay.
enum class DelayRole { None, Transport, GenerationWait, Idle };

struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  double start_time = 0.0;  // seconds
  double duration = 0.0;    // schedule occupancy in seconds
  double param = 0.0;       // RZ angle, or Delay noise time in seconds
  DelayRole role = DelayRole::None;
  int ep_index = -1;  // >= 0 for ops belonging to the generation of raw EP k
};

bool is_unitary(GateKind kind);
int gate_arity(GateKind kind);
std::string gate_name(GateKind kind);
// Unitary matrix of a unitary gate; throws DomainError for other kinds.
Matrix gate_matrix(GateKind kind, double param = 0.0);

DensityMatrix new_ground_state(int num_qubits, int cap = kDefaultQubitCap);
DensityMatrix make_werner(double fidelity);
DensityMatrix make_bell_diagonal(double a, double b, double c, double d);
DensityMatrix make_bell_state(int which);  // 0: phi+, 1: phi-, 2: psi+, 3: psi-

// Bell-basis coefficients (phi+, phi-, psi+, psi-) of a two-qubit state.
std::array<double, 4> bell_coefficients(const DensityMatrix& two_qubit);

DensityMatrix apply_unitary(const DensityMatrix& state, const GateOp& gate);
DensityMatrix apply_operator(const DensityMatrix& state, const Matrix& u,
                             std::span<const int> targets);
DensityMatrix apply_channel(const DensityMatrix& state,
                            const QuantumChannel& channel,
                            std::span<const int> targets);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                     int cap = kDefaultQubitCap);
DensityMatrix partial_trace(const DensityMatrix& state,
                            std::span<const int> discard);
// Moves qubits so that `order[i]` becomes qubit i.
DensityMatrix permute_qubits(const DensityMatrix& state,
                             std::span<const int> order);

double fidelity_to_bell(const DensityMatrix& state, std::pair<int, int> pair);

// Readout confusion of one qubit: p01 = P(read 1 | state 0),
// p10 = P(read 0 | state 1).
struct Confusion {
  double p01 = 0.0;
  double p10 = 0.0;
};

struct PostSelection {
  DensityMatrix state;
  double success_prob;
};

// Z-measures every qubit named in `pairs` and keeps the branch where both
// outcomes of each pair agree. `confusion` is indexed by qubit and may be
// empty for ideal readout. Measured qubits are traced out.
PostSelection measure_zz_coincidence(
    const DensityMatrix& state, std::span<const std::pair<int, int>> pairs,
    std::span<const Confusion> confusion = {});

// Unnormalized accepted block of a coincidence measurement on the unmeasured
// qubits (1x1 when every qubit is measured). Trace = accepted probability
// times the input trace.
Matrix coincidence_block(const DensityMatrix& state,
                         std::span<const std::pair<int, int>> pairs,
                         std::span<const Confusion> confusion = {});

// Trace-preserving reset toward diag(1-p, p).
std::vector<Matrix> reset_kraus(double reset_error_p);

DensityMatrix reset_qubits(const DensityMatrix& state,
                           std::span<const int> targets, double reset_error_p);

// Bilateral twirl onto the Werner family; 12 local Clifford-Pauli products.
QuantumChannel werner_twirl_channel();

}  // namespace eppsel
