#include "frlogic/quantum/protocol.hpp"

#include <cmath>

namespace frlogic::quantum {

namespace {

using Vec = StateVector::Vector;
using Mat = DenseOperator::Matrix;

StateVector single(const SystemLabel& s, Complex c0, Complex c1) {
  Vec v(2);
  v << c0, c1;
  return StateVector(Register{s}, v);
}

DenseOperator single_op(const SystemLabel& s, Complex m00, Complex m01, Complex m10, Complex m11) {
  Mat m(2, 2);
  m << m00, m01, m10, m11;
  return DenseOperator(Register{s}, m);
}

StateVector bell(const SystemLabel& x, const SystemLabel& y, double sign) {
  const double h = std::sqrt(0.5);
  Vec v = Vec::Zero(4);
  v(0) = h;
  v(3) = sign * h;
  return StateVector(Register{x, y}, v);
}

DenseOperator on_ralg(const DenseOperator& op) { return embed(op, ralg()); }

}  // namespace

Register ralg() { return Register{"r", "a", "l", "g"}; }

StateVector ket0(const SystemLabel& s) { return single(s, 1.0, 0.0); }
StateVector ket1(const SystemLabel& s) { return single(s, 0.0, 1.0); }
StateVector ket_plus(const SystemLabel& s) { return single(s, std::sqrt(0.5), std::sqrt(0.5)); }
StateVector ket_init(const SystemLabel& s) { return single(s, std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0)); }

StateVector ket_ok(const SystemLabel& x, const SystemLabel& y) { return bell(x, y, -1.0); }
StateVector ket_fail(const SystemLabel& x, const SystemLabel& y) { return bell(x, y, 1.0); }

DenseOperator pi0(const SystemLabel& s) { return single_op(s, 1.0, 0.0, 0.0, 0.0); }
DenseOperator pi1(const SystemLabel& s) { return single_op(s, 0.0, 0.0, 0.0, 1.0); }
DenseOperator sigma_x(const SystemLabel& s) { return single_op(s, 0.0, 1.0, 1.0, 0.0); }
DenseOperator sigma_z(const SystemLabel& s) { return single_op(s, 1.0, 0.0, 0.0, -1.0); }

DenseOperator hadamard(const SystemLabel& s) {
  return Complex(std::sqrt(0.5)) * (sigma_x(s) + sigma_z(s));
}

DenseOperator pi_ok(const SystemLabel& x, const SystemLabel& y) { return DenseOperator::projector_onto(ket_ok(x, y)); }
DenseOperator pi_fail(const SystemLabel& x, const SystemLabel& y) { return DenseOperator::projector_onto(ket_fail(x, y)); }

Observable ok_fail_observable(const SystemLabel& x, const SystemLabel& y) {
  // |ok> and |fail> span the even-parity subspace; "odd" covers |01>, |10>.
  const DenseOperator odd = complement(pi_ok(x, y) + pi_fail(x, y));
  return Observable({{"ok", pi_ok(x, y)}, {"fail", pi_fail(x, y)}, {"odd", odd}});
}

StateVector initial_state() { return tensor(tensor(ket_init("r"), ket0("a")), tensor(ket0("l"), ket0("g"))); }

FrUnitaries fr_unitaries() {
  const DenseOperator controlled_flip_a = on_ralg(pi0("r")) + on_ralg(tensor(pi1("r"), sigma_x("a")));
  const DenseOperator controlled_h_l = on_ralg(pi0("r")) + on_ralg(tensor(pi1("r"), hadamard("l")));
  const DenseOperator cnot_lg = embed(pi0("l"), Register{"l", "g"}) + tensor(pi1("l"), sigma_x("g"));
  const DenseOperator controlled_copy = on_ralg(pi0("r")) + on_ralg(tensor(pi1("r"), cnot_lg));
  return FrUnitaries{controlled_flip_a, controlled_h_l, controlled_copy, cnot_lg};
}

FrHeisenbergProjectors fr_heisenberg_projectors() {
  const FrUnitaries u = fr_unitaries();
  const DenseOperator U = u.U_tprime * u.U_t1;
  const DenseOperator Ubar = u.U_t2 * U;
  return FrHeisenbergProjectors{
      on_ralg(pi0("r")),
      on_ralg(pi1("r")),
      heisenberg(on_ralg(pi0("l")), U),
      heisenberg(on_ralg(pi1("l")), U),
      heisenberg(on_ralg(pi_ok("r", "a")), Ubar),
      heisenberg(on_ralg(pi_ok("l", "g")), Ubar),
  };
}

StateVector psi_state() {
  const FrUnitaries u = fr_unitaries();
  return evolve(u.U_t2, evolve(u.U_tprime, evolve(u.U_t1, initial_state())));
}

double real_expectation(const StateVector& v, const DenseOperator& op, double tol) {
  const Complex e = expectation(v, op);
  if (std::abs(e.imag()) > tol) throw NotHermitian("expectation has imaginary part " + std::to_string(e.imag()));
  return e.real();
}

AppendixValues appendix_values(double tol) {
  const FrHeisenbergProjectors p = fr_heisenberg_projectors();
  const FrUnitaries u = fr_unitaries();
  const StateVector init = initial_state();
  const StateVector plus0 = tensor(ket_plus("l"), ket0("g"));

  AppendixValues out;
  out.a1 = real_expectation(init, p.Piok_t3 * p.Pi0_t2, tol);
  out.a2_joint = real_expectation(init, p.Piok_t4 * p.Piok_t3 * p.Pi1_t2 * p.Pi1_t1, tol);
  out.a2_complement = real_expectation(init, complement(p.Piok_t4 * p.Piok_t3 * p.Pi1_t2 * p.Pi1_t1), tol);
  out.a3 = real_expectation(init, p.Pi1_t2 * p.Pi0_t1, tol);
  out.a4_fail = born(plus0, heisenberg(pi_fail("l", "g"), u.U_a, tol), tol);
  out.a4_not_ok = born(plus0, heisenberg(complement(pi_ok("l", "g")), u.U_a, tol), tol);
  return out;
}

}  // namespace frlogic::quantum
