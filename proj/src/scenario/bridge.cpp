#include "frlogic/scenario/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frlogic/quantum/protocol.hpp"
#include "frlogic/scenario/protocol_model.hpp"

namespace frlogic::scenario {

using logic::atom;
using logic::neg;
using namespace quantum;

const char* to_string(RuleMode m) { return m == RuleMode::Necessity ? "necessity" : "witness"; }

double compute_expectation(const BridgeRule& r, double tol) {
  if (r.ordered_product) return real_expectation(r.state, r.projector, tol);
  return born(r.state, r.projector, tol);
}

namespace {

BridgeRule rule(std::string id, std::string agent, std::string indicator, StateVector state, DenseOperator op,
                Formula target, std::string time, std::vector<std::string> unitaries, std::string source,
                bool ordered_product = false) {
  BridgeRule r{std::move(id),     std::move(agent), std::move(indicator),  std::move(state),
               std::move(op),     ordered_product,  std::move(target),     std::move(time),
               std::move(unitaries), std::move(source), 0.0,              RuleMode::Necessity};
  return r;
}

}  // namespace

std::vector<BridgeRule> bridge_rules(double tol) {
  const FrUnitaries u = fr_unitaries();
  const FrHeisenbergProjectors h = fr_heisenberg_projectors();
  const std::vector<std::string> global{"U_t1", "U_t'", "U_t2"};
  const StateVector plus0 = tensor(ket_plus("l"), ket0("g"));
  const DenseOperator not_fr = complement(h.Piok_t4 * h.Piok_t3 * h.Pi1_t2 * h.Pi1_t1);
  const Formula phi_fr = protocol_clauses().phi_fr;

  std::vector<BridgeRule> rules;
  rules.push_back(rule("a.one", "a", "ind[a;1;r;t1]", ket1("r"), pi1("r"), atom(atoms::a1), "t1", {}, "<1|pi1|1>"));
  rules.push_back(rule("a.fail", "a", "ind[a;+,0;lg;t']", plus0, heisenberg(pi_fail("l", "g"), u.U_a),
                       atom(atoms::d_fail), "t4", {"U_a"}, "A4 fail"));
  rules.push_back(rule("a.not-ok", "a", "ind[a;+,0;lg;t']", plus0, heisenberg(complement(pi_ok("l", "g")), u.U_a),
                       neg(atom(atoms::d_ok)), "t4", {"U_a"}, "A4 not ok"));
  rules.push_back(rule("g.not-zero", "g", "ind[g;1;l;t2]", ket1("l"), complement(pi0("l")), neg(atom("ket[0;l;t2]")),
                       "t2", {}, "<1|(I - pi0)|1>"));
  rules.push_back(rule("c.ok-not-zero", "c", "ind[c;init;ralg;0]", initial_state(), complement(h.Piok_t3 * h.Pi0_t2),
                       neg(logic::conj(atom(atoms::c_ok), atom(atoms::g0))), "t3", global, "A1", true));
  rules.push_back(rule("c.ok", "c", "ind[c;ok;ra;t3]", ket_ok("r", "a"), pi_ok("r", "a"), atom(atoms::c_ok), "t3", {},
                       "<ok|pi_ok|ok>"));
  rules.push_back(rule("c.not-fr", "c", "ind[c;init;ralg;0]", initial_state(), not_fr, neg(phi_fr), "t4", global,
                       "A2 complement", true));
  rules.push_back(rule("d.not-fr", "d", "ind[d;init;ralg;0]", initial_state(), not_fr, neg(phi_fr), "t4", global,
                       "A2 complement", true));
  rules.push_back(rule("d.ok-not-fail", "d", "ind[d;ok;lg;t4]", ket_ok("l", "g"), complement(pi_fail("l", "g")),
                       neg(atom(atoms::d_fail)), "t4", {}, "<ok|(I - pi_fail)|ok>"));
  rules.push_back(rule("d.fail-not-ok", "d", "ind[d;fail;lg;t4]", ket_fail("l", "g"), complement(pi_ok("l", "g")),
                       neg(atom(atoms::d_ok)), "t4", {}, "<fail|(I - pi_ok)|fail>"));
  rules.push_back(rule("d.nested-init", "d", "ind2[d;c;init;ralg;0]", initial_state(),
                       DenseOperator::projector_onto(initial_state()), atom("ind[c;init;ralg;0]"), "0", {},
                       "<init|init><init|init>"));
  rules.push_back(rule("d.nested-ok", "d", "ind2[d;c;ok;ra;5]", ket_ok("r", "a"), pi_ok("r", "a"),
                       atom("ind[c;ok;ra;5]"), "5", {}, "<ok|pi_ok|ok>"));

  for (auto& r : rules) {
    const auto& permitted = upsilon_table().at(r.agent);
    for (const auto& un : r.unitaries)
      if (std::find(permitted.begin(), permitted.end(), un) == permitted.end())
        throw std::logic_error("rule " + r.id + ": agent " + r.agent + " may not apply " + un);
    r.expectation = compute_expectation(r, tol);
    if (r.expectation < -tol || r.expectation > 1.0 + tol)
      throw std::logic_error("rule " + r.id + ": expectation outside [0, 1]");
    r.mode = std::abs(r.expectation - 1.0) <= tol ? RuleMode::Necessity : RuleMode::Witness;
  }
  return rules;
}

bool uses_amanda_unitary(const BridgeRule& r) {
  return std::find(r.unitaries.begin(), r.unitaries.end(), "U_a") != r.unitaries.end();
}

StarConstraints star_constraints(const logic::KripkeModel& skeleton, const BridgeRule& rule) {
  StarConstraints out;
  if (rule.mode == RuleMode::Witness) {
    out.witnesses.push_back({rule.id, rule.agent, atom(rule.indicator), neg(rule.target)});
    return out;
  }
  const logic::WorldSet guard = skeleton.atom(rule.indicator);
  const logic::WorldSet ok = logic::extension(skeleton, rule.target);
  for (Eigen::Index w = 0; w < guard.size(); ++w) {
    if (!guard(w)) continue;
    for (Eigen::Index v = 0; v < ok.size(); ++v)
      if (!ok(v)) out.forbidden.push_back({rule.id, rule.agent, static_cast<std::size_t>(w), static_cast<std::size_t>(v)});
  }
  return out;
}

StarConstraints star_constraints(const logic::KripkeModel& skeleton, const std::vector<BridgeRule>& rules) {
  StarConstraints out;
  for (const auto& r : rules) {
    StarConstraints one = star_constraints(skeleton, r);
    out.forbidden.insert(out.forbidden.end(), one.forbidden.begin(), one.forbidden.end());
    out.witnesses.insert(out.witnesses.end(), one.witnesses.begin(), one.witnesses.end());
  }
  return out;
}

std::vector<ExpectationMismatch> recheck_expectations(const std::vector<BridgeRule>& rules, double tol) {
  std::vector<ExpectationMismatch> out;
  for (const auto& r : rules) {
    const double now = compute_expectation(r, tol);
    if (std::abs(now - r.expectation) > tol) out.push_back({r.id, r.expectation, now});
  }
  return out;
}

}  // namespace frlogic::scenario
