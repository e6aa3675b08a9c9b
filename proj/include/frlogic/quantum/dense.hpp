#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frlogic/quantum/register.hpp"
#include "frlogic/tolerance.hpp"

namespace frlogic::quantum {

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

// State vectors and operators over a register of two-level systems.
//
// Amplitude index i encodes the basis ket |b_0 b_1 ... b_{n-1}> with b_0 (the
// first register slot) as the most significant bit, so tensor() is the plain
// Kronecker product of the underlying arrays.

template <typename Scalar>
class BasicStateVector {
 public:
  using Real = RealOf<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicStateVector(Register reg, Vector amplitudes, Real tolerance = Real(kDefaultTolerance))
      : register_(std::move(reg)), amplitudes_(std::move(amplitudes)) {
    require_distinct(register_);
    if (static_cast<std::size_t>(amplitudes_.size()) != dimension_of(register_))
      throw RegisterMismatch("state over " + to_string(register_) + " needs " + std::to_string(dimension_of(register_)) +
                             " amplitudes, got " + std::to_string(amplitudes_.size()));
    if (std::abs(amplitudes_.squaredNorm() - Real(1)) > tolerance)
      throw NotNormalized("state over " + to_string(register_) + " has squared norm " + std::to_string(double(amplitudes_.squaredNorm())));
  }

  /// Computational basis ket, e.g. basis({"l","g"}, {0, 1}) = |0>_l |1>_g.
  static BasicStateVector basis(Register reg, const std::vector<int>& bits) {
    if (bits.size() != reg.size()) throw RegisterMismatch("basis(): one bit per system required");
    std::size_t index = 0;
    for (int b : bits) index = (index << 1) | static_cast<std::size_t>(b != 0);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension_of(reg)));
    v(static_cast<Eigen::Index>(index)) = Scalar(1);
    return BasicStateVector(std::move(reg), std::move(v));
  }

  /// Normalizes `amplitudes` before construction; throws NotNormalized on a zero vector.
  static BasicStateVector normalized(Register reg, Vector amplitudes) {
    const Real n = amplitudes.norm();
    if (n == Real(0)) throw NotNormalized("cannot normalize the zero vector");
    return BasicStateVector(std::move(reg), amplitudes / n);
  }

  const Register& reg() const { return register_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Scalar operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  Register register_;
  Vector amplitudes_;
};

template <typename Scalar>
class BasicDenseOperator {
 public:
  using Real = RealOf<Scalar>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicDenseOperator(Register reg, Matrix entries) : register_(std::move(reg)), entries_(std::move(entries)) {
    require_distinct(register_);
    const auto d = static_cast<Eigen::Index>(dimension_of(register_));
    if (entries_.rows() != entries_.cols()) throw RegisterMismatch("operator matrix must be square");
    if (entries_.rows() != d)
      throw RegisterMismatch("operator over " + to_string(register_) + " needs dimension " + std::to_string(d) + ", got " +
                             std::to_string(entries_.rows()));
  }

  static BasicDenseOperator identity(Register reg) {
    const auto d = static_cast<Eigen::Index>(dimension_of(reg));
    return BasicDenseOperator(std::move(reg), Matrix::Identity(d, d));
  }

  /// |v><v| for a normalized state.
  static BasicDenseOperator projector_onto(const BasicStateVector<Scalar>& v) {
    return BasicDenseOperator(v.reg(), v.amplitudes() * v.amplitudes().adjoint());
  }

  const Register& reg() const { return register_; }
  const Matrix& entries() const { return entries_; }
  std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }
  Scalar operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Register register_;
  Matrix entries_;
};

namespace detail {

template <typename Scalar>
void require_same_register(const Register& a, const Register& b, const char* what) {
  if (a != b) throw RegisterMismatch(std::string(what) + ": register " + to_string(a) + " does not match " + to_string(b));
}

inline std::size_t bit_at(std::size_t index, std::size_t slot, std::size_t width) { return (index >> (width - 1 - slot)) & 1U; }

}  // namespace detail

// --- algebra -----------------------------------------------------------------

template <typename Scalar>
BasicStateVector<Scalar> tensor(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b) {
  Register reg = concat(a.reg(), b.reg());
  typename BasicStateVector<Scalar>::Vector out(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
  return BasicStateVector<Scalar>(std::move(reg), std::move(out));
}

template <typename Scalar>
BasicDenseOperator<Scalar> tensor(const BasicDenseOperator<Scalar>& a, const BasicDenseOperator<Scalar>& b) {
  Register reg = concat(a.reg(), b.reg());
  const auto ra = a.entries().rows(), rb = b.entries().rows();
  typename BasicDenseOperator<Scalar>::Matrix out(ra * rb, ra * rb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ra; ++j) out.block(i * rb, j * rb, rb, rb) = a.entries()(i, j) * b.entries();
  return BasicDenseOperator<Scalar>(std::move(reg), std::move(out));
}

/// Extends `op` to `target`, acting as identity on every system not in op's register.
template <typename Scalar>
BasicDenseOperator<Scalar> embed(const BasicDenseOperator<Scalar>& op, const Register& target) {
  require_distinct(target);
  const std::size_t n = target.size();
  const std::size_t m = op.reg().size();
  std::vector<std::size_t> slots(m);
  std::size_t op_mask = 0;
  for (std::size_t k = 0; k < m; ++k) {
    auto s = slot_of(target, op.reg()[k]);
    if (!s) throw RegisterMismatch("embed(): system '" + op.reg()[k].name() + "' missing from target " + to_string(target));
    slots[k] = *s;
    op_mask |= std::size_t{1} << (n - 1 - *s);
  }
  auto local_index = [&](std::size_t index) {
    std::size_t local = 0;
    for (std::size_t k = 0; k < m; ++k) local = (local << 1) | detail::bit_at(index, slots[k], n);
    return local;
  };
  const std::size_t d = dimension_of(target);
  using Matrix = typename BasicDenseOperator<Scalar>::Matrix;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if ((i & ~op_mask) != (j & ~op_mask)) continue;
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = op(local_index(i), local_index(j));
    }
  return BasicDenseOperator<Scalar>(target, std::move(out));
}

template <typename Scalar>
BasicDenseOperator<Scalar> adjoint(const BasicDenseOperator<Scalar>& op) {
  return BasicDenseOperator<Scalar>(op.reg(), op.entries().adjoint());
}

template <typename Scalar>
BasicDenseOperator<Scalar> operator*(const BasicDenseOperator<Scalar>& a, const BasicDenseOperator<Scalar>& b) {
  detail::require_same_register<Scalar>(a.reg(), b.reg(), "operator product");
  return BasicDenseOperator<Scalar>(a.reg(), a.entries() * b.entries());
}

template <typename Scalar>
BasicDenseOperator<Scalar> operator+(const BasicDenseOperator<Scalar>& a, const BasicDenseOperator<Scalar>& b) {
  detail::require_same_register<Scalar>(a.reg(), b.reg(), "operator sum");
  return BasicDenseOperator<Scalar>(a.reg(), a.entries() + b.entries());
}

template <typename Scalar>
BasicDenseOperator<Scalar> operator-(const BasicDenseOperator<Scalar>& a, const BasicDenseOperator<Scalar>& b) {
  detail::require_same_register<Scalar>(a.reg(), b.reg(), "operator difference");
  return BasicDenseOperator<Scalar>(a.reg(), a.entries() - b.entries());
}

template <typename Scalar>
BasicDenseOperator<Scalar> operator*(const Scalar& s, const BasicDenseOperator<Scalar>& a) {
  return BasicDenseOperator<Scalar>(a.reg(), s * a.entries());
}

/// I - op on the same register.
template <typename Scalar>
BasicDenseOperator<Scalar> complement(const BasicDenseOperator<Scalar>& op) {
  return BasicDenseOperator<Scalar>::identity(op.reg()) - op;
}

// --- predicates --------------------------------------------------------------

template <typename Scalar>
bool is_hermitian(const BasicDenseOperator<Scalar>& op, RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  return (op.entries() - op.entries().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
bool is_unitary(const BasicDenseOperator<Scalar>& op, RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  const auto& u = op.entries();
  const auto id = BasicDenseOperator<Scalar>::Matrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tol && (u * u.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

/// Hermitian idempotent.
template <typename Scalar>
bool is_projector(const BasicDenseOperator<Scalar>& op, RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  const auto& p = op.entries();
  return is_hermitian(op, tol) && (p * p - p).cwiseAbs().maxCoeff() <= tol;
}

// --- states under operators --------------------------------------------------

/// <v|op|v>, with no Hermiticity requirement (operator products allowed).
template <typename Scalar>
Scalar expectation(const BasicStateVector<Scalar>& state, const BasicDenseOperator<Scalar>& op) {
  detail::require_same_register<Scalar>(state.reg(), op.reg(), "expectation");
  return state.amplitudes().dot(op.entries() * state.amplitudes());
}

/// Born-rule value <v|op|v> of a Hermitian operator. For projectors the result
/// is clamped to [0, 1] once it lies within tolerance of that interval.
template <typename Scalar>
RealOf<Scalar> born(const BasicStateVector<Scalar>& state, const BasicDenseOperator<Scalar>& op,
                    RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  using Real = RealOf<Scalar>;
  detail::require_same_register<Scalar>(state.reg(), op.reg(), "born");
  if (!is_hermitian(op, tol)) throw NotHermitian("born(): operator over " + to_string(op.reg()) + " is not Hermitian");
  const Scalar value = expectation(state, op);
  if (std::abs(std::imag(value)) > tol) throw NotHermitian("born(): expectation has imaginary part");
  Real re = std::real(value);
  if (is_projector(op, tol)) {
    if (re < Real(0) && re >= -tol) re = Real(0);
    if (re > Real(1) && re <= Real(1) + tol) re = Real(1);
  }
  return re;
}

template <typename Scalar>
BasicStateVector<Scalar> evolve(const BasicDenseOperator<Scalar>& u, const BasicStateVector<Scalar>& state,
                               RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  detail::require_same_register<Scalar>(state.reg(), u.reg(), "evolve");
  if (!is_unitary(u, tol)) throw NotUnitary("evolve(): operator over " + to_string(u.reg()) + " is not unitary");
  return BasicStateVector<Scalar>(state.reg(), u.entries() * state.amplitudes(), tol);
}

/// Selective projective update  v -> P v / |P v|.
template <typename Scalar>
BasicStateVector<Scalar> lueders(const BasicStateVector<Scalar>& state, const BasicDenseOperator<Scalar>& proj,
                                 RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  const auto p = born(state, proj, tol);
  if (p <= tol) throw UndefinedUpdate("lueders(): outcome has zero probability");
  typename BasicStateVector<Scalar>::Vector projected = proj.entries() * state.amplitudes();
  return BasicStateVector<Scalar>(state.reg(), projected / std::sqrt(p), tol);
}

/// Heisenberg-picture evolution U^dagger P U.
template <typename Scalar>
BasicDenseOperator<Scalar> heisenberg(const BasicDenseOperator<Scalar>& proj, const BasicDenseOperator<Scalar>& u,
                                      RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  detail::require_same_register<Scalar>(proj.reg(), u.reg(), "heisenberg");
  if (!is_unitary(u, tol)) throw NotUnitary("heisenberg(): evolution over " + to_string(u.reg()) + " is not unitary");
  return BasicDenseOperator<Scalar>(proj.reg(), u.entries().adjoint() * proj.entries() * u.entries());
}

/// Ray equality: a = e^{i phi} b for a single phase.
template <typename Scalar>
bool equal_up_to_phase(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b,
                       RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  if (a.reg() != b.reg()) return false;
  const Scalar overlap = b.amplitudes().dot(a.amplitudes());
  if (std::abs(overlap) <= tol) return false;
  const Scalar phase = overlap / std::abs(overlap);
  return (a.amplitudes() - phase * b.amplitudes()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
bool approx_equal(const BasicDenseOperator<Scalar>& a, const BasicDenseOperator<Scalar>& b,
                  RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  return a.reg() == b.reg() && (a.entries() - b.entries()).cwiseAbs().maxCoeff() <= tol;
}

// --- density operators -------------------------------------------------------

/// Convex combination of pure-state projectors.
template <typename Scalar>
class BasicDensityOperator {
 public:
  using Real = RealOf<Scalar>;
  using Matrix = typename BasicDenseOperator<Scalar>::Matrix;

  static BasicDensityOperator pure(const BasicStateVector<Scalar>& v) {
    return BasicDensityOperator(v.reg(), v.amplitudes() * v.amplitudes().adjoint());
  }

  static BasicDensityOperator mixture(const std::vector<std::pair<Real, BasicStateVector<Scalar>>>& terms,
                                      Real tol = Real(kDefaultTolerance)) {
    if (terms.empty()) throw QuantumError("mixture(): no terms");
    const Register reg = terms.front().second.reg();
    const auto d = static_cast<Eigen::Index>(dimension_of(reg));
    Matrix rho = Matrix::Zero(d, d);
    Real total = 0;
    for (const auto& [w, v] : terms) {
      detail::require_same_register<Scalar>(reg, v.reg(), "mixture");
      if (w < Real(0)) throw QuantumError("mixture(): negative weight");
      total += w;
      rho += Scalar(w) * (v.amplitudes() * v.amplitudes().adjoint());
    }
    if (std::abs(total - Real(1)) > tol) throw QuantumError("mixture(): weights sum to " + std::to_string(double(total)));
    return BasicDensityOperator(reg, std::move(rho));
  }

  const Register& reg() const { return register_; }
  const Matrix& entries() const { return rho_; }
  Real trace() const { return std::real(rho_.trace()); }

 private:
  BasicDensityOperator(Register reg, Matrix rho) : register_(std::move(reg)), rho_(std::move(rho)) {}

  template <typename S>
  friend BasicDensityOperator<S> lueders(const BasicDensityOperator<S>&, const BasicDenseOperator<S>&, RealOf<S>);

  Register register_;
  Matrix rho_;
};

/// tr(rho op).
template <typename Scalar>
RealOf<Scalar> born(const BasicDensityOperator<Scalar>& rho, const BasicDenseOperator<Scalar>& op,
                    RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  detail::require_same_register<Scalar>(rho.reg(), op.reg(), "born");
  if (!is_hermitian(op, tol)) throw NotHermitian("born(): operator is not Hermitian");
  return std::real((rho.entries() * op.entries()).trace());
}

/// rho -> P rho P / tr(rho P).
template <typename Scalar>
BasicDensityOperator<Scalar> lueders(const BasicDensityOperator<Scalar>& rho, const BasicDenseOperator<Scalar>& proj,
                                     RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance)) {
  const auto p = born(rho, proj, tol);
  if (p <= tol) throw UndefinedUpdate("lueders(): outcome has zero probability");
  const auto& pm = proj.entries();
  return BasicDensityOperator<Scalar>(rho.reg(), pm * rho.entries() * pm / Scalar(p));
}

// --- printing ----------------------------------------------------------------

/// Row-major "(re,im)" pairs, one matrix row per line.
template <typename Scalar>
std::string to_string(const BasicDenseOperator<Scalar>& op, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision);
  os << "[" << to_string(op.reg()) << "]\n";
  for (Eigen::Index i = 0; i < op.entries().rows(); ++i) {
    for (Eigen::Index j = 0; j < op.entries().cols(); ++j) {
      const Scalar v = op.entries()(i, j);
      os << (j ? " " : "") << "(" << std::real(v) << "," << std::imag(v) << ")";
    }
    os << "\n";
  }
  return os.str();
}

template <typename Scalar>
std::string to_string(const BasicStateVector<Scalar>& v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << "[" << to_string(v.reg()) << "]";
  for (Eigen::Index i = 0; i < v.amplitudes().size(); ++i)
    os << " (" << std::real(v.amplitudes()(i)) << "," << std::imag(v.amplitudes()(i)) << ")";
  return os.str();
}

using Complex = std::complex<double>;
using StateVector = BasicStateVector<Complex>;
using DenseOperator = BasicDenseOperator<Complex>;
using DensityOperator = BasicDensityOperator<Complex>;

}  // namespace frlogic::quantum
