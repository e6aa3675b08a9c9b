#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frlogic/quantum/dense.hpp"
#include "frlogic/quantum/observable.hpp"
#include "frlogic/quantum/protocol.hpp"

using namespace frlogic::quantum;

namespace {

constexpr double kEps = 1e-9;

// Independent oracle: basis-permutation construction of the protocol unitaries
// over |r a l g>, index = 8r + 4a + 2l + g.
Eigen::MatrixXcd oracle_u_t1() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 16; ++i) {
    const int r = (i >> 3) & 1;
    m(i ^ (r << 2), i) = 1.0;
  }
  return m;
}

Eigen::MatrixXcd oracle_u_tprime() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 16; ++i) {
    if (((i >> 3) & 1) == 0) {
      m(i, i) = 1.0;
      continue;
    }
    const int l = (i >> 1) & 1;
    const int base = i & ~2;
    m(base, i) += h;
    m(base | 2, i) += l ? -h : h;
  }
  return m;
}

Eigen::MatrixXcd oracle_u_t2() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 16; ++i) {
    const int r = (i >> 3) & 1;
    const int l = (i >> 1) & 1;
    m(i ^ (r & l), i) = 1.0;
  }
  return m;
}

Eigen::VectorXcd oracle_init() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(0) = std::sqrt(1.0 / 3.0);
  v(8) = std::sqrt(2.0 / 3.0);
  return v;
}

Eigen::MatrixXcd diag_bits(int shift, int value) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 16; ++i)
    if (((i >> shift) & 1) == value) m(i, i) = 1.0;
  return m;
}

// |ok><ok| on the pair of bits (hi, lo), identity elsewhere.
Eigen::MatrixXcd ok_pair(int hi, int lo) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const int mask = (1 << hi) | (1 << lo);
      if ((i & ~mask) != (j & ~mask)) continue;
      auto amp = [&](int k) {
        const int b = ((k >> hi) & 1) * 2 + ((k >> lo) & 1);
        return b == 0 ? 1.0 / std::sqrt(2.0) : b == 3 ? -1.0 / std::sqrt(2.0) : 0.0;
      };
      m(i, j) = amp(i) * amp(j);
    }
  return m;
}

StateVector random_state(std::mt19937& rng, Register reg) {
  std::normal_distribution<double> n(0.0, 1.0);
  StateVector::Vector v(static_cast<Eigen::Index>(dimension_of(reg)));
  for (auto& x : v) x = Complex(n(rng), n(rng));
  return StateVector::normalized(std::move(reg), v);
}

}  // namespace

TEST(Tensor, BasisProduct) {
  const StateVector v = tensor(ket0("l"), ket0("g"));
  EXPECT_EQ(to_string(v.reg()), "lg");
  EXPECT_NEAR(std::abs(v[0] - 1.0), 0.0, kEps);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(v[i]), 0.0, kEps);
}

TEST(Tensor, ProjectorExtension) {
  const DenseOperator p = tensor(pi0("l"), DenseOperator::identity({"g"}));
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
  expect(0, 0) = expect(1, 1) = 1.0;
  EXPECT_LE((p.entries() - expect).cwiseAbs().maxCoeff(), kEps);
}

TEST(Tensor, PlusTimesZero) {
  const StateVector v = tensor(ket_plus("l"), ket0("g"));
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(v[0] - h), 0.0, kEps);
  EXPECT_NEAR(std::abs(v[1]), 0.0, kEps);
  EXPECT_NEAR(std::abs(v[2] - h), 0.0, kEps);
  EXPECT_NEAR(std::abs(v[3]), 0.0, kEps);
}

TEST(Tensor, LabelClash) {
  EXPECT_THROW(tensor(ket0("l"), ket1("l")), LabelClash);
  EXPECT_THROW(tensor(pi0("a"), pi1("a")), LabelClash);
}

TEST(Embed, SlotAIsSecondFactor) {
  const DenseOperator e = embed(pi1("a"), ralg());
  EXPECT_LE((e.entries() - diag_bits(2, 1)).cwiseAbs().maxCoeff(), kEps);
  // Slot r is a different operator.
  EXPECT_GT((embed(pi1("r"), ralg()).entries() - e.entries()).cwiseAbs().maxCoeff(), 0.5);
}

TEST(Embed, IdentityAndBitFlip) {
  EXPECT_TRUE(approx_equal(embed(DenseOperator::identity({"l"}), {"l", "g"}), DenseOperator::identity({"l", "g"})));
  const DenseOperator x = embed(sigma_x("g"), {"l", "g"});
  const StateVector out = evolve(x, tensor(ket0("l"), ket0("g")));
  EXPECT_TRUE(equal_up_to_phase(out, tensor(ket0("l"), ket1("g"))));
}

TEST(Embed, PermutedTarget) {
  // embed of a two-system operator into a reversed register equals the swap conjugate.
  const DenseOperator cx = embed(pi0("l"), {"l", "g"}) + tensor(pi1("l"), sigma_x("g"));
  const DenseOperator reversed = embed(cx, {"g", "l"});
  const StateVector in = tensor(ket0("g"), ket1("l"));
  EXPECT_TRUE(equal_up_to_phase(evolve(reversed, in), tensor(ket1("g"), ket1("l"))));
}

TEST(Embed, MissingLabel) { EXPECT_THROW(embed(pi0("x"), {"l", "g"}), RegisterMismatch); }

TEST(Adjoint, Basics) {
  EXPECT_TRUE(approx_equal(adjoint(sigma_x("l")), sigma_x("l")));
  DenseOperator::Matrix m = DenseOperator::Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  DenseOperator::Matrix mt = DenseOperator::Matrix::Zero(2, 2);
  mt(1, 0) = 1.0;
  EXPECT_TRUE(approx_equal(adjoint(DenseOperator({"l"}, m)), DenseOperator({"l"}, mt)));
  EXPECT_TRUE(approx_equal(adjoint(fr_unitaries().U_t1), fr_unitaries().U_t1));
}

TEST(Predicates, UnitaryProjector) {
  EXPECT_TRUE(is_unitary(fr_unitaries().U_tprime));
  EXPECT_FALSE(is_projector(sigma_x("l")));
  EXPECT_TRUE(is_projector(pi_ok("l", "g")));
  EXPECT_FALSE(is_unitary(pi0("l")));
}

TEST(Born, Values) {
  EXPECT_NEAR(born(psi_state(), tensor(pi_ok("r", "a"), pi_ok("l", "g"))), 1.0 / 12.0, kEps);
  EXPECT_NEAR(born(ket0("l"), pi0("l")), 1.0, kEps);
  EXPECT_NEAR(born(ket_fail("l", "g"), pi_ok("l", "g")), 0.0, kEps);
}

TEST(Born, RegisterMismatchAndNonHermitian) {
  EXPECT_THROW(born(ket0("l"), pi0("g")), RegisterMismatch);
  DenseOperator::Matrix m = DenseOperator::Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(born(ket0("l"), DenseOperator({"l"}, m)), NotHermitian);
}

TEST(Lueders, PlusToZero) { EXPECT_TRUE(equal_up_to_phase(lueders(ket_plus("l"), pi0("l")), ket0("l"))); }

TEST(Lueders, ZeroProbability) { EXPECT_THROW(lueders(ket0("l"), pi1("l")), UndefinedUpdate); }

TEST(Lueders, PsiOnOkRa) {
  // Hand expansion: |00>_ra = (ok+fail)/sqrt2, |11>_ra = (fail-ok)/sqrt2; the ok
  // part of Psi is -sqrt(1/6)|ok>_ra|11>_lg, its |00>_lg terms cancel.
  const StateVector post = lueders(psi_state(), embed(pi_ok("r", "a"), ralg()));
  StateVector::Vector expect = StateVector::Vector::Zero(16);
  expect(3) = 1.0 / std::sqrt(2.0);    // |0 0 1 1>
  expect(15) = -1.0 / std::sqrt(2.0);  // |1 1 1 1>
  EXPECT_TRUE(equal_up_to_phase(post, StateVector(ralg(), expect)));
  EXPECT_NEAR(born(psi_state(), embed(pi_ok("r", "a"), ralg())), 1.0 / 6.0, kEps);
}

TEST(Lueders, DensityMatchesPure) {
  const DensityOperator rho = DensityOperator::pure(ket_plus("l"));
  const DensityOperator post = lueders(rho, pi0("l"));
  EXPECT_NEAR(post.trace(), 1.0, kEps);
  EXPECT_NEAR(std::abs(post.entries()(0, 0) - 1.0), 0.0, kEps);
  const DensityOperator mix = DensityOperator::mixture({{0.25, ket0("l")}, {0.75, ket1("l")}});
  EXPECT_NEAR(born(mix, pi1("l")), 0.75, kEps);
  EXPECT_THROW(lueders(DensityOperator::pure(ket0("l")), pi1("l")), UndefinedUpdate);
}

TEST(Heisenberg, IdentityAndNonUnitary) {
  EXPECT_TRUE(approx_equal(heisenberg(pi0("l"), DenseOperator::identity({"l"})), pi0("l")));
  EXPECT_THROW(heisenberg(pi0("l"), pi1("l")), NotUnitary);
}

TEST(Heisenberg, Pi0OnLUnderUa) {
  // Hand product: U_a is a CNOT controlled by l, so it commutes with pi0 x I.
  const DenseOperator h = heisenberg(embed(pi0("l"), {"l", "g"}), fr_unitaries().U_a);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
  expect(0, 0) = expect(1, 1) = 1.0;
  EXPECT_LE((h.entries() - expect).cwiseAbs().maxCoeff(), kEps);
  const DenseOperator hf = heisenberg(pi_fail("l", "g"), fr_unitaries().U_a);
  EXPECT_TRUE(is_projector(hf));
  EXPECT_NEAR(born(tensor(ket_plus("l"), ket0("g")), hf), 1.0, kEps);
}

TEST(Protocol, UnitariesMatchOracle) {
  const FrUnitaries u = fr_unitaries();
  EXPECT_LE((u.U_t1.entries() - oracle_u_t1()).cwiseAbs().maxCoeff(), kEps);
  EXPECT_LE((u.U_tprime.entries() - oracle_u_tprime()).cwiseAbs().maxCoeff(), kEps);
  EXPECT_LE((u.U_t2.entries() - oracle_u_t2()).cwiseAbs().maxCoeff(), kEps);
  for (const DenseOperator* op : {&u.U_t1, &u.U_tprime, &u.U_t2}) {
    EXPECT_TRUE(is_unitary(*op));
    EXPECT_TRUE(approx_equal(*op, adjoint(*op)));
  }
  EXPECT_TRUE(is_unitary(u.U_a));
}

TEST(Protocol, Ut1OnInit) {
  const StateVector out = evolve(fr_unitaries().U_t1, initial_state());
  StateVector::Vector expect = StateVector::Vector::Zero(16);
  expect(0) = std::sqrt(1.0 / 3.0);
  expect(12) = std::sqrt(2.0 / 3.0);
  EXPECT_TRUE(equal_up_to_phase(out, StateVector(ralg(), expect)));
}

TEST(Protocol, UaPlusZeroIsFail) {
  EXPECT_TRUE(equal_up_to_phase(evolve(fr_unitaries().U_a, tensor(ket_plus("l"), ket0("g"))), ket_fail("l", "g")));
}

TEST(Protocol, Ut2TrivialOnZeroBranch) {
  const StateVector in = tensor(tensor(ket0("r"), ket1("a")), tensor(ket1("l"), ket0("g")));
  EXPECT_TRUE(equal_up_to_phase(evolve(fr_unitaries().U_t2, in), in));
}

TEST(Protocol, PsiAmplitudes) {
  const StateVector psi = psi_state();
  for (std::size_t i = 0; i < 16; ++i) {
    const double expect = (i == 0 || i == 12 || i == 15) ? 1.0 / std::sqrt(3.0) : 0.0;
    EXPECT_NEAR(std::abs(psi[i] - expect), 0.0, kEps) << "index " << i;
  }
}

TEST(Protocol, AppendixValuesAgainstOracle) {
  // Oracle: the same products assembled from the permutation matrices above.
  const Eigen::MatrixXcd U = oracle_u_tprime() * oracle_u_t1();
  const Eigen::MatrixXcd Ubar = oracle_u_t2() * U;
  const Eigen::MatrixXcd Pi0_t1 = diag_bits(3, 0), Pi1_t1 = diag_bits(3, 1);
  const Eigen::MatrixXcd Pi0_t2 = U.adjoint() * diag_bits(1, 0) * U;
  const Eigen::MatrixXcd Pi1_t2 = U.adjoint() * diag_bits(1, 1) * U;
  const Eigen::MatrixXcd Piok_t3 = Ubar.adjoint() * ok_pair(3, 2) * Ubar;
  const Eigen::MatrixXcd Piok_t4 = Ubar.adjoint() * ok_pair(1, 0) * Ubar;
  const Eigen::VectorXcd init = oracle_init();
  const double o1 = init.dot(Piok_t3 * Pi0_t2 * init).real();
  const double o2 = init.dot(Piok_t4 * Piok_t3 * Pi1_t2 * Pi1_t1 * init).real();
  const double o3 = init.dot(Pi1_t2 * Pi0_t1 * init).real();
  EXPECT_NEAR(o1, 0.0, kEps);
  EXPECT_NEAR(o2, 1.0 / 12.0, kEps);
  EXPECT_NEAR(o3, 0.0, kEps);

  const AppendixValues v = appendix_values();
  EXPECT_NEAR(v.a1, 0.0, kEps);
  EXPECT_NEAR(v.a2_joint, 1.0 / 12.0, kEps);
  EXPECT_NEAR(v.a2_complement, 11.0 / 12.0, kEps);
  EXPECT_NEAR(v.a3, 0.0, kEps);
  EXPECT_NEAR(v.a4_fail, 1.0, kEps);
  EXPECT_NEAR(v.a4_not_ok, 1.0, kEps);
}

TEST(Protocol, HeisenbergProjectorsAreProjectors) {
  const FrHeisenbergProjectors p = fr_heisenberg_projectors();
  for (const DenseOperator* op : {&p.Pi0_t1, &p.Pi1_t1, &p.Pi0_t2, &p.Pi1_t2, &p.Piok_t3, &p.Piok_t4})
    EXPECT_TRUE(is_projector(*op));
  EXPECT_TRUE(approx_equal(p.Pi0_t2 + p.Pi1_t2, DenseOperator::identity(ralg())));
}

TEST(Protocol, HeisenbergComposition) {
  // Evolving by U_t2 U_t' U_t1 equals evolving stepwise, last unitary applied first.
  const FrUnitaries u = fr_unitaries();
  const DenseOperator pi = embed(pi_ok("l", "g"), ralg());
  const DenseOperator whole = heisenberg(pi, u.U_t2 * u.U_tprime * u.U_t1);
  const DenseOperator stepwise = heisenberg(heisenberg(heisenberg(pi, u.U_t2), u.U_tprime), u.U_t1);
  EXPECT_TRUE(approx_equal(whole, stepwise));
}

TEST(Observable, OkFailResolvesIdentity) {
  const Observable o = ok_fail_observable("l", "g");
  EXPECT_EQ(o.outcomes().size(), 3u);
  EXPECT_TRUE(approx_equal(o.projector("ok"), pi_ok("l", "g")));
  EXPECT_THROW(o.projector("maybe"), QuantumError);
  EXPECT_THROW(Observable({{"zero", pi0("l")}}), QuantumError);
  EXPECT_THROW(Observable({{"x", sigma_x("l")}, {"y", pi0("l")}}), NotHermitian);
}

TEST(State, Invariants) {
  EXPECT_THROW(StateVector({"l"}, StateVector::Vector::Ones(2)), NotNormalized);
  EXPECT_THROW(StateVector({"l", "g"}, StateVector::Vector::Ones(2) / std::sqrt(2.0)), RegisterMismatch);
  EXPECT_THROW(StateVector({"l", "l"}, StateVector::Vector::Ones(4) / 2.0), LabelClash);
}

TEST(State, PhaseEquality) {
  const StateVector v = ket_plus("l");
  const StateVector w(v.reg(), v.amplitudes() * std::polar(1.0, 0.7));
  EXPECT_TRUE(equal_up_to_phase(v, w));
  EXPECT_FALSE(equal_up_to_phase(v, ket0("l")));
}

TEST(Printing, RowMajorPairs) {
  const std::string s = to_string(sigma_x("l"));
  EXPECT_EQ(s, "[l]\n(0,0) (1,0)\n(1,0) (0,0)\n");
}

// ----------------------------------------------------------------------------
// Property checks over random states and random single-system projectors.

TEST(Property, NormPreservedByTensorAndLueders) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const StateVector a = random_state(rng, {"r", "a"});
    const StateVector b = random_state(rng, {"l", "g"});
    const StateVector t = tensor(a, b);
    EXPECT_NEAR(t.amplitudes().squaredNorm(), 1.0, kEps);
    const DenseOperator proj = embed(trial % 2 ? pi_ok("r", "a") : pi0("l"), ralg());
    if (born(t, proj) <= kEps) continue;
    const StateVector once = lueders(t, proj);
    EXPECT_NEAR(once.amplitudes().squaredNorm(), 1.0, kEps);
    EXPECT_TRUE(equal_up_to_phase(lueders(once, proj), once));
  }
}

TEST(Property, BornIdentityAndReality) {
  std::mt19937 rng(11);
  const FrHeisenbergProjectors p = fr_heisenberg_projectors();
  for (int trial = 0; trial < 200; ++trial) {
    const StateVector s = random_state(rng, ralg());
    EXPECT_NEAR(born(s, DenseOperator::identity(ralg())), 1.0, kEps);
    EXPECT_NEAR(std::imag(expectation(s, p.Piok_t4)), 0.0, kEps);
    const double v = born(s, p.Piok_t3);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Property, HeisenbergPreservesProjectors) {
  const FrUnitaries u = fr_unitaries();
  const DenseOperator chain = u.U_t2 * u.U_tprime * u.U_t1;
  for (const DenseOperator& pi : {embed(pi0("r"), ralg()), embed(pi1("a"), ralg()), embed(pi0("l"), ralg()),
                                  embed(pi1("g"), ralg()), embed(pi_ok("r", "a"), ralg()), embed(pi_fail("l", "g"), ralg())})
    for (const DenseOperator* uu : {&u.U_t1, &u.U_tprime, &u.U_t2, &chain}) EXPECT_TRUE(is_projector(heisenberg(pi, *uu)));
}
