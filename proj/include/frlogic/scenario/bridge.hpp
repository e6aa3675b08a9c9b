#pragma once

#include <string>
#include <vector>

#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/kripke.hpp"
#include "frlogic/logic/model_finder.hpp"
#include "frlogic/quantum/dense.hpp"
#include "frlogic/tolerance.hpp"

namespace frlogic::scenario {

using logic::Formula;

/// Necessity: expectation 1, so every accessible world satisfies the target.
/// Witness: expectation below 1, so some accessible world violates it.
enum class RuleMode { Necessity, Witness };

const char* to_string(RuleMode m);

/// Links an indicator state of `agent` to knowledge about a later outcome.
struct BridgeRule {
  std::string id;
  std::string agent;
  std::string indicator;  ///< atom naming the indicator state
  quantum::StateVector state;
  quantum::DenseOperator projector;  ///< Heisenberg operator for the target
  /// The operator is an ordered product of Heisenberg projectors; only its
  /// real expectation is used.
  bool ordered_product = false;
  Formula target;
  std::string time;
  std::vector<std::string> unitaries;  ///< evolutions used to build `projector`
  std::string source;                  ///< which appendix value backs it
  double expectation = 0.0;            ///< recorded when the table is built
  RuleMode mode = RuleMode::Necessity;
};

/// Expectation of the rule's operator in its state. Throws quantum::NotHermitian
/// for a non-Hermitian operator unless `ordered_product` is set.
double compute_expectation(const BridgeRule& r, double tol = kDefaultTolerance);

/// The protocol's rule table with expectations computed and modes assigned.
/// Throws std::logic_error if a rule uses a unitary the agent may not apply.
std::vector<BridgeRule> bridge_rules(double tol = kDefaultTolerance);

/// Rules using Amanda's unitary.
bool uses_amanda_unitary(const BridgeRule& r);

struct StarConstraints {
  std::vector<logic::ForbiddenPair> forbidden;  ///< the set Y, per agent
  std::vector<logic::WitnessRequirement> witnesses;
};

/// Necessity rules forbid (w, w') when w satisfies the indicator and w'
/// violates the target; witness rules require an accessible violator.
StarConstraints star_constraints(const logic::KripkeModel& skeleton, const std::vector<BridgeRule>& rules);
StarConstraints star_constraints(const logic::KripkeModel& skeleton, const BridgeRule& rule);

struct ExpectationMismatch {
  std::string rule;
  double recorded;
  double recomputed;
};

/// Recomputes every expectation; returns the ones that drifted beyond `tol`.
std::vector<ExpectationMismatch> recheck_expectations(const std::vector<BridgeRule>& rules,
                                                      double tol = kDefaultTolerance);

}  // namespace frlogic::scenario
