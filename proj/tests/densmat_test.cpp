#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "eppsel/densmat.hpp"
#include "eppsel/errors.hpp"
#include "test_util.hpp"

namespace eppsel {
namespace {

using testing::max_abs_diff;
using testing::random_density;

// Outer product of a statevector given as explicit amplitudes.
Matrix projector(std::vector<Complex> amps) {
  Eigen::VectorXcd v(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) v(i) = amps[i];
  return v * v.adjoint();
}

const double kS = 1.0 / std::sqrt(2.0);

TEST(GroundState, SingleAndTwoQubits) {
  EXPECT_EQ(max_abs_diff(new_ground_state(1).data(), projector({1, 0})), 0.0);
  Matrix two = Matrix::Zero(4, 4);
  two(0, 0) = 1.0;
  EXPECT_EQ(max_abs_diff(new_ground_state(2).data(), two), 0.0);
  EXPECT_DOUBLE_EQ(new_ground_state(3).trace_weight(), 1.0);
}

TEST(GroundState, CapExceeded) {
  EXPECT_THROW(new_ground_state(13), CapacityError);
  try {
    new_ground_state(13);
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
  EXPECT_NO_THROW(new_ground_state(12).num_qubits());
}

TEST(Werner, Limits) {
  EXPECT_LT(max_abs_diff(make_werner(1.0).data(), projector({kS, 0, 0, kS})), 1e-15);
  EXPECT_LT(max_abs_diff(make_werner(0.25).data(), Matrix::Identity(4, 4) / 4.0), 1e-15);
  EXPECT_NEAR(fidelity_to_bell(make_werner(0.7), {0, 1}), 0.7, 1e-12);
  EXPECT_THROW(make_werner(0.2), DomainError);
  EXPECT_THROW(make_werner(1.01), DomainError);
}

TEST(Werner, FidelityRoundTripRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.25, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double f = u(rng);
    EXPECT_NEAR(fidelity_to_bell(make_werner(f), {0, 1}), f, 1e-12);
  }
}

TEST(BellDiagonal, MatchesExplicitProjectors) {
  const Matrix phip = projector({kS, 0, 0, kS});
  const Matrix phim = projector({kS, 0, 0, -kS});
  const Matrix psip = projector({0, kS, kS, 0});
  const Matrix psim = projector({0, kS, -kS, 0});
  const Matrix expect = 0.4 * phip + 0.3 * phim + 0.2 * psip + 0.1 * psim;
  EXPECT_LT(max_abs_diff(make_bell_diagonal(0.4, 0.3, 0.2, 0.1).data(), expect), 1e-15);
  EXPECT_LT(max_abs_diff(make_bell_diagonal(1, 0, 0, 0).data(), phip), 1e-15);
  EXPECT_LT(max_abs_diff(make_bell_diagonal(0.7, 0.1, 0.1, 0.1).data(),
                         make_werner(0.7).data()),
            1e-15);
  EXPECT_THROW(make_bell_diagonal(0.5, 0.5, 0.1, 0.1), DomainError);
  EXPECT_THROW(make_bell_diagonal(1.1, -0.1, 0, 0), DomainError);
  const auto c = bell_coefficients(make_bell_diagonal(0.4, 0.3, 0.2, 0.1));
  EXPECT_NEAR(c[0], 0.4, 1e-15);
  EXPECT_NEAR(c[1], 0.3, 1e-15);
  EXPECT_NEAR(c[2], 0.2, 1e-15);
  EXPECT_NEAR(c[3], 0.1, 1e-15);
}

TEST(Unitary, SpotChecks) {
  GateOp x{GateKind::X, {0}};
  EXPECT_EQ(max_abs_diff(apply_unitary(new_ground_state(1), x).data(), projector({0, 1})), 0.0);

  std::mt19937_64 rng(3);
  const DensityMatrix rho = random_density(3, rng);
  GateOp cx{GateKind::CNOT, {2, 0}};
  EXPECT_LT(max_abs_diff(apply_unitary(apply_unitary(rho, cx), cx).data(), rho.data()), 1e-14);
  GateOp s{GateKind::S, {1}}, sdg{GateKind::Sdg, {1}};
  EXPECT_LT(max_abs_diff(apply_unitary(apply_unitary(rho, s), sdg).data(), rho.data()), 1e-14);

  GateOp bad{GateKind::X, {3}};
  EXPECT_THROW(apply_unitary(rho, bad), IndexError);
}

TEST(Unitary, CnotControlIsFirstTarget) {
  // |10> -> |11> with control qubit 0 (MSB).
  DensityMatrix rho(projector({0, 0, 1, 0}));
  GateOp cx{GateKind::CNOT, {0, 1}};
  EXPECT_EQ(max_abs_diff(apply_unitary(rho, cx).data(), projector({0, 0, 0, 1})), 0.0);
  // Reversed roles leave |10> alone.
  GateOp xc{GateKind::CNOT, {1, 0}};
  EXPECT_EQ(max_abs_diff(apply_unitary(rho, xc).data(), rho.data()), 0.0);
}

TEST(Unitary, BasisGatesAreUnitaryAndHadamardDecomposes) {
  for (GateKind k : {GateKind::RZ, GateKind::SX, GateKind::X, GateKind::S, GateKind::Sdg,
                     GateKind::CNOT}) {
    const Matrix u = gate_matrix(k, 0.37);
    EXPECT_LT(max_abs_diff(u.adjoint() * u, Matrix::Identity(u.rows(), u.cols())), 1e-12);
  }
  const Matrix rz = gate_matrix(GateKind::RZ, M_PI / 2);
  const Matrix h = rz * gate_matrix(GateKind::SX) * rz;
  Matrix ref(2, 2);
  ref << kS, kS, kS, -kS;
  const Complex phase = h(0, 0) / ref(0, 0);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LT(max_abs_diff(h, phase * ref), 1e-12);
}

TEST(Unitary, EmbeddingMatchesKroneckerOracle) {
  std::mt19937_64 rng(5);
  const DensityMatrix rho = random_density(3, rng);
  // X on qubit 1 of 3 equals I (x) X (x) I.
  Matrix x = gate_matrix(GateKind::X);
  Matrix big = Matrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) big(i ^ 2, i) = 1.0;
  const Matrix expect = big * rho.data() * big.adjoint();
  const int t[1] = {1};
  EXPECT_LT(max_abs_diff(apply_operator(rho, x, t).data(), expect), 1e-14);
}

TEST(Channel, IdentityAndCompleteness) {
  std::mt19937_64 rng(7);
  const DensityMatrix rho = random_density(2, rng);
  const int t[1] = {0};
  EXPECT_LT(max_abs_diff(apply_channel(rho, QuantumChannel::identity(1), t).data(), rho.data()),
            1e-15);
  Matrix half = Matrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(QuantumChannel({half}), ChannelError);
  const int two[2] = {0, 1};
  EXPECT_THROW(apply_channel(rho, QuantumChannel::identity(1), two), DomainError);
}

TEST(Tensor, KroneckerProperties) {
  DensityMatrix zero(projector({1, 0}));
  DensityMatrix one(projector({0, 1}));
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1.0;
  EXPECT_EQ(max_abs_diff(tensor(zero, one).data(), expect), 0.0);
  std::mt19937_64 rng(9);
  DensityMatrix a(random_density(1, rng).data() * 0.5);
  DensityMatrix b(random_density(2, rng).data() * 0.3);
  EXPECT_NEAR(tensor(a, b).trace_weight(), 0.15, 1e-14);
  EXPECT_THROW(tensor(new_ground_state(6), new_ground_state(7)), CapacityError);
}

TEST(PartialTrace, Properties) {
  std::mt19937_64 rng(13);
  const DensityMatrix a = random_density(1, rng);
  const DensityMatrix b = random_density(2, rng);
  const int bq[2] = {1, 2};
  EXPECT_LT(max_abs_diff(partial_trace(tensor(a, b), bq).data(), a.data()), 1e-14);
  const int aq[1] = {0};
  EXPECT_LT(max_abs_diff(partial_trace(tensor(a, b), aq).data(), b.data()), 1e-14);
  const int second[1] = {1};
  EXPECT_LT(max_abs_diff(partial_trace(make_werner(1.0), second).data(),
                         Matrix::Identity(2, 2) * 0.5),
            1e-15);
  const int all[2] = {0, 1};
  EXPECT_THROW(partial_trace(make_werner(0.5), all), DomainError);
}

TEST(Permute, SwapsQubits) {
  std::mt19937_64 rng(15);
  const DensityMatrix a = random_density(1, rng);
  const DensityMatrix b = random_density(2, rng);
  const int order[3] = {1, 2, 0};
  EXPECT_LT(max_abs_diff(permute_qubits(tensor(a, b), order).data(), tensor(b, a).data()), 1e-14);
}

TEST(Fidelity, Basics) {
  EXPECT_NEAR(fidelity_to_bell(make_werner(1.0), {0, 1}), 1.0, 1e-15);
  EXPECT_NEAR(fidelity_to_bell(DensityMatrix(Matrix::Identity(4, 4) / 4.0), {0, 1}), 0.25, 1e-15);
  EXPECT_NEAR(fidelity_to_bell(make_werner(0.83), {0, 1}), 0.83, 1e-12);
  EXPECT_THROW(fidelity_to_bell(make_werner(0.83), {1, 1}), DomainError);
  // Pair embedded inside a larger register.
  const DensityMatrix big = tensor(tensor(new_ground_state(1), make_werner(0.6)),
                                   new_ground_state(1));
  EXPECT_NEAR(fidelity_to_bell(big, {1, 2}), 0.6, 1e-12);
  EXPECT_NEAR(fidelity_to_bell(big, {2, 1}), 0.6, 1e-12);
}

// Brute-force coincidence probability: enumerate outcomes of every measured
// qubit with explicit POVM weights.
double brute_force_prob(const DensityMatrix& rho, const std::vector<std::pair<int, int>>& pairs,
                        const std::vector<Confusion>& conf, bool coincide) {
  const int n = rho.num_qubits();
  double total = 0.0;
  const int m = static_cast<int>(pairs.size()) * 2;
  for (int basis = 0; basis < (1 << n); ++basis) {
    const double pop = rho.data()(basis, basis).real();
    for (int outcome = 0; outcome < (1 << m); ++outcome) {
      double w = pop;
      bool all_equal = true;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        int r[2];
        const int qs[2] = {pairs[p].first, pairs[p].second};
        for (int s = 0; s < 2; ++s) {
          r[s] = (outcome >> (2 * p + s)) & 1;
          const int bit = (basis >> (n - 1 - qs[s])) & 1;
          const Confusion c = conf[qs[s]];
          const double p1 = bit == 0 ? c.p01 : 1.0 - c.p10;
          w *= r[s] == 1 ? p1 : 1.0 - p1;
        }
        all_equal = all_equal && r[0] == r[1];
      }
      if (all_equal == coincide) total += w;
    }
  }
  return total;
}

TEST(Coincidence, ProbabilityAndComplementSumToOne) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(5, rng);
    std::vector<Confusion> conf(5);
    for (auto& c : conf) c = {u(rng), u(rng)};
    const std::vector<std::pair<int, int>> pairs{{1, 3}, {4, 2}};
    const PostSelection ps = measure_zz_coincidence(rho, pairs, conf);
    const double accept = brute_force_prob(rho, pairs, conf, true);
    const double reject = brute_force_prob(rho, pairs, conf, false);
    EXPECT_NEAR(ps.success_prob, accept, 1e-12);
    EXPECT_NEAR(accept + reject, 1.0, 1e-12);
    EXPECT_NEAR(ps.state.trace_weight(), 1.0, 1e-12);
    EXPECT_EQ(ps.state.num_qubits(), 1);
  }
}

TEST(Coincidence, PerfectPairsAfterBilateralCnot) {
  DensityMatrix rho = tensor(make_werner(1.0), make_werner(1.0));
  rho = apply_unitary(rho, GateOp{GateKind::CNOT, {0, 2}});
  rho = apply_unitary(rho, GateOp{GateKind::CNOT, {1, 3}});
  const std::vector<std::pair<int, int>> pairs{{2, 3}};
  const PostSelection ps = measure_zz_coincidence(rho, pairs);
  EXPECT_NEAR(ps.success_prob, 1.0, 1e-12);
  EXPECT_NEAR(fidelity_to_bell(ps.state, {0, 1}), 1.0, 1e-12);
}

TEST(Coincidence, WernerRoundSuccessProbability) {
  DensityMatrix rho = tensor(make_werner(0.7), make_werner(0.7));
  rho = apply_unitary(rho, GateOp{GateKind::CNOT, {0, 2}});
  rho = apply_unitary(rho, GateOp{GateKind::CNOT, {1, 3}});
  const std::vector<std::pair<int, int>> pairs{{2, 3}};
  const PostSelection ps = measure_zz_coincidence(rho, pairs);
  EXPECT_NEAR(ps.success_prob, 0.68, 1e-12);
}

TEST(Coincidence, UninformativeReadoutKeepsMarginal) {
  std::mt19937_64 rng(19);
  const DensityMatrix rho = random_density(4, rng);
  std::vector<Confusion> conf(4, Confusion{0.5, 0.5});
  const std::vector<std::pair<int, int>> pairs{{2, 3}};
  const PostSelection ps = measure_zz_coincidence(rho, pairs, conf);
  const int discard[2] = {2, 3};
  EXPECT_NEAR(ps.success_prob, 0.5, 1e-12);
  EXPECT_LT(max_abs_diff(ps.state.data(), partial_trace(rho, discard).data()), 1e-12);
}

TEST(Coincidence, DegenerateBranchThrows) {
  // |01> always disagrees.
  DensityMatrix rho(projector({0, 0, 0, 0, 0, 1, 0, 0}));
  const std::vector<std::pair<int, int>> pairs{{1, 2}};
  EXPECT_THROW(measure_zz_coincidence(rho, pairs), DegenerateBranchError);
}

TEST(Reset, Marginals) {
  std::mt19937_64 rng(21);
  const DensityMatrix rho = random_density(2, rng);
  const int t[1] = {1};
  const int other[1] = {0};
  const DensityMatrix r0 = reset_qubits(rho, t, 0.0);
  EXPECT_LT(max_abs_diff(partial_trace(r0, other).data(), projector({1, 0})), 1e-14);
  const DensityMatrix r1 = reset_qubits(rho, t, 1.0);
  EXPECT_LT(max_abs_diff(partial_trace(r1, other).data(), projector({0, 1})), 1e-14);
  // Output is uncorrelated: reduced(0) (x) diag(1-p, p).
  const DensityMatrix rp = reset_qubits(rho, t, 0.3);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.7;
  d(1, 1) = 0.3;
  EXPECT_LT(max_abs_diff(rp.data(), tensor(partial_trace(rho, t), DensityMatrix(d)).data()),
            1e-14);
  // Entanglement destroyed: partner is maximally mixed.
  const DensityMatrix bell = reset_qubits(make_werner(1.0), other, 0.0);
  EXPECT_LT(max_abs_diff(partial_trace(bell, other).data(), Matrix::Identity(2, 2) * 0.5), 1e-15);
}

TEST(Twirl, MapsBellDiagonalToWerner) {
  std::mt19937_64 rng(23);
  const QuantumChannel tw = werner_twirl_channel();
  EXPECT_LT(tw.completeness_defect(), 1e-12);
  const int t[2] = {0, 1};
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = random_density(2, rng);
    const double f = fidelity_to_bell(rho, {0, 1});
    const DensityMatrix out = apply_channel(rho, tw, t);
    const double t3 = (1.0 - f) / 3.0;
    EXPECT_LT(max_abs_diff(out.data(), make_bell_diagonal(f, t3, t3, 1.0 - f - 2 * t3).data()),
              1e-12)
        << "f=" << f;
  }
}

TEST(Properties, HermitianPsdPreserved) {
  std::mt19937_64 rng(25);
  const QuantumChannel tw = werner_twirl_channel();
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix rho = random_density(3, rng);
    const DensityMatrix u = apply_unitary(rho, GateOp{GateKind::CNOT, {2, 1}});
    const int t[2] = {0, 2};
    const DensityMatrix c = apply_channel(u, tw, t);
    const int d[1] = {1};
    const DensityMatrix p = partial_trace(c, d);
    for (const DensityMatrix* s : {&u, &c, &p}) {
      EXPECT_LT(s->hermiticity_defect(), 1e-12);
      EXPECT_GT(s->min_eigenvalue(), -1e-10);
      EXPECT_NEAR(s->trace_weight(), 1.0, 1e-12);
    }
  }
}

}  // namespace
}  // namespace eppsel
