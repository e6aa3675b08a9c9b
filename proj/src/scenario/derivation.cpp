#include "frlogic/scenario/derivation.hpp"

#include <algorithm>
#include <stdexcept>

namespace frlogic::scenario {

using logic::neg;

const char* to_string(Scope s) {
  switch (s) {
    case Scope::AtPoint:
      return "at-point";
    case Scope::Everywhere:
      return "everywhere";
    case Scope::Somewhere:
      return "somewhere";
  }
  return "?";
}

bool is_contradiction(const Formula& f) {
  return f.kind() == logic::Kind::And && f.rhs().kind() == logic::Kind::Not && f.rhs().child() == f.lhs();
}

Derivation::Derivation(logic::ModelSpec base) : base_(std::move(base)) {
  base_.frame_properties.clear();
  base_.validities.clear();
  base_.at_point.clear();
  base_.somewhere.clear();
  base_.forbidden.clear();
  base_.witnesses.clear();
  base_.point.reset();
  base_.allowed.clear();
}

void Derivation::add_clause(const std::string& id, Formula f, bool flagged) {
  if (!groups_.emplace(id, Group{std::move(f), {}, {}, flagged}).second)
    throw std::logic_error("duplicate premise '" + id + "'");
}

void Derivation::add_constraints(const std::string& id, std::vector<logic::ForbiddenPair> forbidden,
                                 std::vector<logic::WitnessRequirement> witnesses, bool flagged) {
  if (!groups_.emplace(id, Group{std::nullopt, std::move(forbidden), std::move(witnesses), flagged}).second)
    throw std::logic_error("duplicate premise '" + id + "'");
}

const TraceStep* Derivation::find(const std::string& id) const {
  for (const auto& s : steps_)
    if (s.id == id) return &s;
  return nullptr;
}

bool Derivation::all_verified() const {
  return std::all_of(steps_.begin(), steps_.end(), [](const TraceStep& s) { return s.verified; });
}

const TraceStep& Derivation::derive(const std::string& id, Scope scope, Formula claim, std::vector<std::string> premises,
                                    std::string justification, std::string milestone) {
  if (find(id)) throw std::logic_error("duplicate step '" + id + "'");
  TraceStep step{id,    scope, claim, premises, std::move(justification), std::move(milestone),
                 std::nullopt, false, false, false, {}, {}};

  logic::ModelSpec spec = base_;
  bool needs_point = scope == Scope::AtPoint;
  bool premises_verified = true;
  for (const auto& p : premises) {
    if (p == "singleton") {
      needs_point = true;
      continue;
    }
    if (p.rfind("frame:", 0) == 0) {
      const auto colon = p.find(':', 6);
      const auto prop = colon == std::string::npos ? std::nullopt : logic::frame_property_from_string(p.substr(6, colon - 6));
      if (!prop) throw std::logic_error("malformed frame premise '" + p + "'");
      spec.frame_properties[p.substr(colon + 1)].push_back(*prop);
      continue;
    }
    if (auto g = groups_.find(p); g != groups_.end()) {
      if (g->second.clause) spec.validities.push_back({p, *g->second.clause});
      spec.forbidden.insert(spec.forbidden.end(), g->second.forbidden.begin(), g->second.forbidden.end());
      spec.witnesses.insert(spec.witnesses.end(), g->second.witnesses.begin(), g->second.witnesses.end());
      step.flagged = step.flagged || g->second.flagged;
      continue;
    }
    const TraceStep* prior = find(p);
    if (!prior) {
      step.missing.push_back(p);
      continue;
    }
    step.flagged = step.flagged || prior->flagged;
    premises_verified = premises_verified && prior->verified;
    switch (prior->scope) {
      case Scope::AtPoint:
        if (prior->point != point_) throw std::logic_error("step '" + p + "' holds at a different point");
        spec.at_point.push_back({"step:" + p, prior->claim});
        needs_point = true;
        break;
      case Scope::Everywhere:
        spec.validities.push_back({"step:" + p, prior->claim});
        break;
      case Scope::Somewhere:
        spec.somewhere.push_back({"step:" + p, prior->claim});
        break;
    }
  }

  if (needs_point && base_.candidates) {
    if (!point_) throw std::logic_error("step '" + id + "' needs a point");
    spec.point = point_;
    if (std::find(premises.begin(), premises.end(), "singleton") != premises.end()) spec.allowed = {*point_};
  }
  if (scope == Scope::AtPoint) step.point = point_;

  if (!step.missing.empty()) {
    steps_.push_back(std::move(step));
    return steps_.back();
  }

  step.premises_consistent = logic::find_model(spec).sat();

  switch (scope) {
    case Scope::AtPoint:
      spec.at_point.push_back({"claim", neg(claim)});
      break;
    case Scope::Everywhere:
      spec.somewhere.push_back({"claim", neg(claim)});
      break;
    case Scope::Somewhere:
      spec.validities.push_back({"claim", neg(claim)});
      break;
  }
  const logic::FindResult r = logic::find_model(spec);
  step.verified = premises_verified && !r.sat() && r.refutation_checked;
  step.core = r.core;
  steps_.push_back(std::move(step));
  return steps_.back();
}

}  // namespace frlogic::scenario
