#pragma once

#include <string>
#include <vector>

#include "frlogic/quantum/dense.hpp"
#include "frlogic/quantum/observable.hpp"

namespace frlogic::quantum {

/// Canonical register of the protocol: coin r, Amanda's memory a, qbit l, Gustavo's memory g.
Register ralg();

// Single-system kets and operators; `s` names the system.
StateVector ket0(const SystemLabel& s);
StateVector ket1(const SystemLabel& s);
StateVector ket_plus(const SystemLabel& s);
/// sqrt(1/3)|0> + sqrt(2/3)|1>, the coin preparation.
StateVector ket_init(const SystemLabel& s);

/// (|00> - |11>)/sqrt(2) and (|00> + |11>)/sqrt(2) on the pair (x, y).
StateVector ket_ok(const SystemLabel& x, const SystemLabel& y);
StateVector ket_fail(const SystemLabel& x, const SystemLabel& y);

DenseOperator pi0(const SystemLabel& s);
DenseOperator pi1(const SystemLabel& s);
DenseOperator sigma_x(const SystemLabel& s);
DenseOperator sigma_z(const SystemLabel& s);
/// (sigma_x + sigma_z)/sqrt(2).
DenseOperator hadamard(const SystemLabel& s);
DenseOperator pi_ok(const SystemLabel& x, const SystemLabel& y);
DenseOperator pi_fail(const SystemLabel& x, const SystemLabel& y);

/// {ok, fail, odd} measurement on the pair (x, y).
Observable ok_fail_observable(const SystemLabel& x, const SystemLabel& y);

/// |init>_r |0>_a |0>_l |0>_g.
StateVector initial_state();

struct FrUnitaries {
  DenseOperator U_t1;      ///< Amanda measures r: controlled flip of a.
  DenseOperator U_tprime;  ///< Amanda prepares l: r-controlled Hadamard on l.
  DenseOperator U_t2;      ///< Gustavo measures l: r-controlled copy of l into g.
  DenseOperator U_a;       ///< Amanda's predicted evolution of (l, g) on her 1-branch.
};

FrUnitaries fr_unitaries();

/// Heisenberg projectors on (r,a,l,g) appearing in the appendix products.
struct FrHeisenbergProjectors {
  DenseOperator Pi0_t1;   ///< pi0 on r (a's reading at t1 is 0)
  DenseOperator Pi1_t1;   ///< pi1 on r
  DenseOperator Pi0_t2;   ///< U^dag (pi0 on l) U, U = U_t' U_t1
  DenseOperator Pi1_t2;   ///< U^dag (pi1 on l) U
  DenseOperator Piok_t3;  ///< Ubar^dag (pi_ok on ra) Ubar, Ubar = U_t2 U
  DenseOperator Piok_t4;  ///< Ubar^dag (pi_ok on lg) Ubar
};

FrHeisenbergProjectors fr_heisenberg_projectors();

/// U_t2 U_t' U_t1 |init>.
StateVector psi_state();

struct AppendixValues {
  double a1 = 0;             ///< <init| Piok_t3 Pi0_t2 |init>
  double a2_joint = 0;       ///< <init| Piok_t4 Piok_t3 Pi1_t2 Pi1_t1 |init>
  double a2_complement = 0;  ///< 1 - a2_joint
  double a3 = 0;             ///< <init| Pi1_t2 Pi0_t1 |init>
  double a4_fail = 0;        ///< <+0| U_a^dag pi_fail U_a |+0>
  double a4_not_ok = 0;      ///< <+0| U_a^dag (I - pi_ok) U_a |+0>
};

/// Computes the six appendix expectations. Throws NotHermitian if an expectation
/// has an imaginary part above `tol`.
AppendixValues appendix_values(double tol = kDefaultTolerance);

/// Real part of <v|op|v>, rejecting an imaginary residue above `tol`.
double real_expectation(const StateVector& v, const DenseOperator& op, double tol = kDefaultTolerance);

}  // namespace frlogic::quantum
