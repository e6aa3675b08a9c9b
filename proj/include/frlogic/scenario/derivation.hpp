#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/model_finder.hpp"

namespace frlogic::scenario {

using logic::Formula;

/// Where a traced claim holds.
enum class Scope { AtPoint, Everywhere, Somewhere };

const char* to_string(Scope s);

struct TraceStep {
  std::string id;
  Scope scope = Scope::AtPoint;
  Formula claim;
  std::vector<std::string> premises;
  std::string justification;
  std::string milestone;  ///< proof step this line completes, empty otherwise
  std::optional<std::size_t> point;  ///< candidate index for AtPoint claims
  bool flagged = false;              ///< rests on a flagged assumption
  bool verified = false;             ///< premises entail the claim
  bool premises_consistent = false;  ///< the cited premises have a model
  std::vector<std::string> missing;  ///< cited premises that are not registered
  std::vector<std::string> core;     ///< constraint labels used by the refutation
};

/// True for `f & ~f`.
bool is_contradiction(const Formula& f);

/// Records derivation steps and checks each as an entailment from its cited
/// premises alone: the premises plus the negated claim must be unsatisfiable
/// over the base search space, with a checked refutation.
///
/// Premise ids are registered clauses and constraint groups, earlier step ids,
/// "frame:<property>:<agent>", and "singleton" (W is just the point).
class Derivation {
 public:
  /// `base` fixes agents and the search space (candidates or world bound).
  /// Its constraint lists are ignored.
  explicit Derivation(logic::ModelSpec base);

  void add_clause(const std::string& id, Formula f, bool flagged = false);
  void add_constraints(const std::string& id, std::vector<logic::ForbiddenPair> forbidden,
                       std::vector<logic::WitnessRequirement> witnesses, bool flagged = false);

  /// Point used by subsequent AtPoint steps (fixed mode only).
  void set_point(std::optional<std::size_t> point) { point_ = point; }

  const TraceStep& derive(const std::string& id, Scope scope, Formula claim, std::vector<std::string> premises,
                          std::string justification, std::string milestone = {});

  const std::vector<TraceStep>& steps() const { return steps_; }
  const TraceStep* find(const std::string& id) const;
  bool all_verified() const;

 private:
  struct Group {
    std::optional<Formula> clause;
    std::vector<logic::ForbiddenPair> forbidden;
    std::vector<logic::WitnessRequirement> witnesses;
    bool flagged = false;
  };

  logic::ModelSpec base_;
  std::map<std::string, Group> groups_;
  std::vector<TraceStep> steps_;
  std::optional<std::size_t> point_;
};

}  // namespace frlogic::scenario
