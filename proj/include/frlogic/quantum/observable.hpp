#pragma once

#include <string>
#include <utility>
#include <vector>

#include "frlogic/quantum/dense.hpp"

namespace frlogic::quantum {

/// Projective measurement: labelled, mutually orthogonal projectors resolving the identity.
template <typename Scalar>
class BasicObservable {
 public:
  using Outcome = std::pair<std::string, BasicDenseOperator<Scalar>>;

  explicit BasicObservable(std::vector<Outcome> outcomes, RealOf<Scalar> tol = RealOf<Scalar>(kDefaultTolerance))
      : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw QuantumError("observable needs at least one outcome");
    const Register& reg = outcomes_.front().second.reg();
    auto sum = BasicDenseOperator<Scalar>(reg, BasicDenseOperator<Scalar>::Matrix::Zero(dimension_of(reg), dimension_of(reg)));
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      const auto& p = outcomes_[i].second;
      if (p.reg() != reg) throw RegisterMismatch("observable outcomes over different registers");
      if (!is_projector(p, tol)) throw NotHermitian("outcome '" + outcomes_[i].first + "' is not a projector");
      for (std::size_t j = 0; j < i; ++j)
        if ((p.entries() * outcomes_[j].second.entries()).cwiseAbs().maxCoeff() > tol)
          throw QuantumError("outcomes '" + outcomes_[j].first + "' and '" + outcomes_[i].first + "' are not orthogonal");
      sum = sum + p;
    }
    if (!approx_equal(sum, BasicDenseOperator<Scalar>::identity(reg), tol))
      throw QuantumError("observable projectors do not sum to the identity");
  }

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const Register& reg() const { return outcomes_.front().second.reg(); }

  const BasicDenseOperator<Scalar>& projector(const std::string& label) const {
    for (const auto& [l, p] : outcomes_)
      if (l == label) return p;
    throw QuantumError("observable has no outcome '" + label + "'");
  }

 private:
  std::vector<Outcome> outcomes_;
};

using Observable = BasicObservable<Complex>;

}  // namespace frlogic::quantum
