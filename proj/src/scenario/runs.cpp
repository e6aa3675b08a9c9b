#include "frlogic/scenario/runs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frlogic/scenario/bridge.hpp"
#include "frlogic/scenario/derivation.hpp"

namespace frlogic::scenario {

using logic::atom;
using logic::box;
using logic::conj;
using logic::diamond;
using logic::FrameProperty;
using logic::neg;

const char* to_string(FrameChoice f) { return f == FrameChoice::Reflexive ? "reflexive" : "serial"; }

std::optional<FrameChoice> frame_choice_from_string(const std::string& s) {
  if (s == "reflexive") return FrameChoice::Reflexive;
  if (s == "serial") return FrameChoice::Serial;
  return std::nullopt;
}

const char* to_string(Drop d) {
  switch (d) {
    case Drop::None:
      return "none";
    case Drop::UForA:
      return "u-a";
    case Drop::StarNecessity:
      return "star-necessity";
    case Drop::StarWitness:
      return "star-witness";
  }
  return "?";
}

std::optional<Drop> drop_from_string(const std::string& s) {
  for (Drop d : {Drop::None, Drop::UForA, Drop::StarNecessity, Drop::StarWitness})
    if (s == to_string(d)) return d;
  return std::nullopt;
}

logic::PointedModel fig1_reconstruction() {
  logic::KripkeModel m{logic::KripkeFrame({"w0", "w1"}, {"x", "y"})};
  m.frame().add_pair("x", 0, 0);
  m.frame().add_pair("x", 1, 1);
  m.frame().add_pair("y", 0, 1);
  m.frame().add_pair("y", 1, 1);
  m.set_atom("phi", (logic::WorldSet(2) << false, true).finished());
  return {std::move(m), 0};
}

namespace {

Formula P(const std::string& text) { return logic::parse(text); }

FrameProperty property_of(FrameChoice f) {
  return f == FrameChoice::Reflexive ? FrameProperty::Reflexive : FrameProperty::Serial;
}

std::string frame_premise(FrameChoice f, const std::string& agent) {
  return std::string("frame:") + to_string(property_of(f)) + ":" + agent;
}

const char* kEigenNote =
    "steps citing eigen-link assume that a known product state puts Amanda's memory in the matching indicator state";
const char* kCommonNote =
    "the protocol clauses and the shared initial-state indicators are imposed as validities, which covers common "
    "knowledge at every nesting depth";

logic::ModelSpec fixed_base(const logic::KripkeModel& skeleton) {
  logic::ModelSpec spec;
  spec.agents = fr_agents();
  spec.candidates = skeleton;
  return spec;
}

std::vector<BridgeRule> kept_rules(Drop drop, double tol) {
  std::vector<BridgeRule> rules = bridge_rules(tol);
  std::erase_if(rules, [drop](const BridgeRule& r) {
    switch (drop) {
      case Drop::None:
        return false;
      case Drop::UForA:
        return uses_amanda_unitary(r);
      case Drop::StarNecessity:
        return r.mode == RuleMode::Necessity;
      case Drop::StarWitness:
        return r.mode == RuleMode::Witness;
    }
    return false;
  });
  return rules;
}

Derivation protocol_derivation(const logic::KripkeModel& skeleton, const std::vector<BridgeRule>& rules) {
  Derivation d(fixed_base(skeleton));
  for (const auto& [id, f] : protocol_clauses().named()) d.add_clause(id, f, id == "eigen-link");
  for (const auto& r : rules) {
    StarConstraints sc = star_constraints(skeleton, r);
    d.add_constraints(r.id, std::move(sc.forbidden), std::move(sc.witnesses));
  }
  return d;
}

/// Every frame condition, protocol clause and bridge constraint at once.
logic::ModelSpec full_spec(const logic::KripkeModel& skeleton, const std::vector<BridgeRule>& rules, FrameChoice frame,
                           std::optional<std::size_t> point) {
  logic::ModelSpec spec = fixed_base(skeleton);
  for (const auto& a : fr_agents()) spec.frame_properties[a] = {property_of(frame)};
  for (const auto& [id, f] : protocol_clauses().named()) spec.validities.push_back({id, f});
  StarConstraints sc = star_constraints(skeleton, rules);
  spec.forbidden = std::move(sc.forbidden);
  spec.witnesses = std::move(sc.witnesses);
  spec.point = point;
  return spec;
}

// Theorem FR, steps i-iv, at the derivation's current point.
void fr_trace(Derivation& d) {
  const std::string ra = frame_premise(FrameChoice::Reflexive, "a");
  const std::string rc = frame_premise(FrameChoice::Reflexive, "c");
  const std::string rd = frame_premise(FrameChoice::Reflexive, "d");
  const std::string rg = frame_premise(FrameChoice::Reflexive, "g");
  using S = Scope;

  d.derive("i.1", S::AtPoint, P("ind[a;1;r;t1]"), {"phi1"}, "Amanda read 1 at t1");
  d.derive("i.2", S::AtPoint, P("[a]M[a,t1]=1"), {"a.one", "i.1"}, "rule a.one, <1|pi1|1> = 1");
  d.derive("i.3", S::AtPoint, P("ket[+;l;t'] & ket[0;g;t']"), {"phi0", "phi1"}, "she prepared |+> on l; g untouched");
  d.derive("i.4", S::AtPoint, P("ket[+,0;lg;t']"), {"tensor", "i.3"}, "product state of l and g");
  d.derive("i.5", S::AtPoint, P("ind[a;+,0;lg;t']"), {"eigen-link", "i.4"}, "Amanda's memory indicates |+,0>");
  d.derive("i.6", S::AtPoint, P("[a]M[d,t4]=fail"), {"a.fail", "i.5"}, "rule a.fail, A4 = 1", "i");
  d.derive("i.7", S::AtPoint, P("[a]~M[d,t4]=ok"), {"a.not-ok", "i.5"}, "rule a.not-ok, A4 = 1");

  d.derive("ii.1", S::Everywhere, P("M[g,t2]=1 -> ind[g;1;l;t2]"), {"phi2"}, "Gustavo's record of his reading");
  d.derive("ii.2", S::Everywhere, P("M[g,t2]=1 -> [g]~ket[0;l;t2]"), {"g.not-zero", "ii.1"},
           "rule g.not-zero, <1|(I - pi0)|1> = 1");
  d.derive("ii.3", S::Everywhere, P("M[g,t2]=1 -> [g]M[a,t1]=1"), {"phi1", "ii.2"},
           "a = 0 would have left l in |0>");
  d.derive("ii.4", S::Everywhere, P("M[a,t1]=1 -> [a]M[a,t1]=1"), {"phi1", "a.one"}, "rule a.one at every a = 1 world");
  d.derive("ii.5", S::Everywhere, P("M[g,t2]=1 -> [g][a]M[a,t1]=1"), {"ii.3", "ii.4"}, "nested boxes");
  d.derive("ii.6", S::Everywhere, P("M[a,t1]=1 -> [a]M[d,t4]=fail"), {"phi0", "phi1", "tensor", "eigen-link", "a.fail"},
           "step i at every a = 1 world");
  d.derive("ii.7", S::Everywhere, P("M[g,t2]=1 -> [g][a]M[d,t4]=fail"), {"ii.3", "ii.6"}, "nested boxes");
  d.derive("ii.8", S::Everywhere, P("M[g,t2]=1 -> [g]M[d,t4]=fail"), {"ii.7", ra}, "T for a inside [g]", "ii");

  d.derive("iii.1", S::Everywhere, P("[c]~(M[c,t3]=ok & M[g,t2]=0)"), {"common", "c.ok-not-zero"},
           "rule c.ok-not-zero, A1 = 0");
  d.derive("iii.2", S::Everywhere, P("M[c,t3]=ok -> [c]M[c,t3]=ok"), {"phi3", "c.ok"}, "rule c.ok");
  d.derive("iii.3", S::Everywhere, P("M[c,t3]=ok -> [c]M[g,t2]=1"), {"iii.1", "iii.2", "phi2"}, "K inside [c]");
  d.derive("iii.4", S::Everywhere, P("M[c,t3]=ok -> [c][g]M[d,t4]=fail"), {"iii.3", "ii.8"}, "step ii inside [c]");
  d.derive("iii.5", S::Everywhere, P("M[c,t3]=ok -> [c]M[d,t4]=fail"), {"iii.4", rg}, "T for g inside [c]", "iii");

  d.derive("iv.1", S::AtPoint, P("[d]ind[c;init;ralg;0]"), {"common", "d.nested-init"}, "rule d.nested-init");
  d.derive("iv.2", S::AtPoint, P("ind2[d;c;ok;ra;5]"), {"phi3", "phi5"}, "Chris's ok is announced to David");
  d.derive("iv.3", S::AtPoint, P("[d]ind[c;ok;ra;5]"), {"d.nested-ok", "iv.2"}, "rule d.nested-ok");
  d.derive("iv.4", S::AtPoint, P("[d]M[c,t3]=ok"), {"phi3", "iv.3"}, "K inside [d]");
  d.derive("iv.5", S::AtPoint, P("[d][c]M[d,t4]=fail"), {"iv.4", "iii.5"}, "step iii inside [d]");
  d.derive("iv.6", S::AtPoint, P("[d]M[d,t4]=fail"), {"iv.5", rc}, "T for c inside [d]");
  d.derive("iv.7", S::AtPoint, P("ind[d;ok;lg;t4]"), {"phi4"}, "David read ok at t4");
  d.derive("iv.8", S::AtPoint, P("[d]~M[d,t4]=fail"), {"d.ok-not-fail", "iv.7"}, "rule d.ok-not-fail");
  d.derive("iv.9", S::AtPoint, P("[d]M[d,t4]=fail & [d]~M[d,t4]=fail"), {"iv.6", "iv.8"}, "conjunction", "iv");
  d.derive("iv.10", S::AtPoint, P("M[d,t4]=fail & ~M[d,t4]=fail"), {"iv.9", rd}, "Lemma 1 with T for d");
}

// Theorem FR*, steps I-II. The derivation's point is set to `hat` before II.
void fr_star_trace(Derivation& d, std::size_t hat) {
  const std::string sa = frame_premise(FrameChoice::Serial, "a");
  using S = Scope;
  const std::string fr = "M[a,t1]=1 & M[g,t2]=1 & M[c,t3]=ok & M[d,t4]=ok";

  d.derive("I.1", S::Everywhere, P("<c>(" + fr + ")"), {"common", "c.not-fr"}, "rule c.not-fr, A2 complement = 11/12 < 1");
  d.derive("I.2", S::Everywhere, P("<d>(" + fr + ")"), {"common", "d.not-fr"}, "rule d.not-fr, A2 complement = 11/12 < 1");
  d.derive("I.3", S::Somewhere, P(fr), {"I.1"}, "the witness world (1,1,ok,ok) is present", "I");

  d.set_point(hat);
  d.derive("II.1", S::AtPoint, P("[a]~M[d,t4]=ok"), {"phi0", "phi1", "tensor", "eigen-link", "a.not-ok"},
           "rule a.not-ok at the witness world, A4 = 1");
  d.derive("II.2", S::AtPoint, P("M[d,t4]=ok & ~M[d,t4]=ok"), {"singleton", "II.1", sa},
           "with W = {w_1_1_ok_ok} seriality is reflexivity");
  d.derive("II.3", S::Somewhere, P("M[d,t4]=fail"), {"II.1", sa, "phi4"}, "Amanda's successor is a fail world");
  d.derive("II.4", S::Everywhere, P("M[d,t4]=fail -> [d]~M[d,t4]=ok"), {"phi4", "d.fail-not-ok"},
           "rule d.fail-not-ok");
  d.derive("II.5", S::Somewhere, P("[d]~M[d,t4]=ok"), {"II.3", "II.4"}, "at that fail world");
  d.derive("II.6", S::Somewhere, P("<d>((" + fr + ") & ~M[d,t4]=ok)"), {"II.5", "I.2"},
           "its David-successor is the witness world");
  d.derive("II.7", S::AtPoint, P("M[d,t4]=ok & ~M[d,t4]=ok"), {"II.6"}, "~ok imposed on the witness world", "II");
}

Verdict decide(const logic::FindResult& r, const std::vector<TraceStep>& trace) {
  if (r.sat()) return Verdict::Sat;
  const bool contradiction = std::any_of(trace.begin(), trace.end(), [](const TraceStep& s) {
    return s.scope == Scope::AtPoint && s.verified && is_contradiction(s.claim);
  });
  return contradiction ? Verdict::Contradiction : Verdict::Unsat;
}

bool milestone_verified(const std::vector<TraceStep>& trace, const std::string& m) {
  return std::any_of(trace.begin(), trace.end(), [&](const TraceStep& s) { return s.milestone == m && s.verified; });
}

std::string pass_count(std::size_t ok, std::size_t total) {
  return std::to_string(ok) + "/" + std::to_string(total);
}

void common_checks(ScenarioReport& rep, const logic::KripkeModel& skeleton, const std::vector<BridgeRule>& rules,
                   double tol) {
  std::size_t valid = 0;
  const auto clauses = protocol_clauses().named();
  for (const auto& [id, f] : clauses) valid += logic::valid_in_model(skeleton, f) ? 1 : 0;
  rep.checks.push_back({"clauses-valid", valid == clauses.size(),
                        pass_count(valid, clauses.size()) + " protocol clauses valid on the 16-world skeleton"});
  const auto drift = recheck_expectations(rules, tol);
  rep.checks.push_back({"expectations-recomputed", drift.empty(),
                        drift.empty() ? "every rule expectation recomputed within tolerance"
                                      : "rule " + drift.front().rule + " drifted"});
  bool flags = true;
  for (const auto& s : rep.trace) {
    const bool cites = std::find(s.premises.begin(), s.premises.end(), "eigen-link") != s.premises.end();
    if (cites && !s.flagged) flags = false;
  }
  rep.checks.push_back({"eigen-link-flagged", flags, "every step resting on eigen-link is flagged"});
}

// Independent re-verification of a completion: semantic evaluation of every
// bridge rule and frame condition, then the forbidden pairs against R.
void completion_checks(ScenarioReport& rep, const logic::FindResult& r, const logic::ModelSpec& spec,
                       const std::vector<BridgeRule>& rules, FrameChoice frame) {
  const logic::KripkeModel& m = *r.model;
  bool frames = true;
  for (const auto& a : fr_agents()) frames = frames && logic::check_frame_property(m.frame(), property_of(frame), a).holds;
  rep.checks.push_back({"model-frame", frames, std::string("every relation is ") + to_string(frame)});

  bool clauses = true;
  for (const auto& [id, f] : protocol_clauses().named()) clauses = clauses && logic::valid_in_model(m, f);
  rep.checks.push_back({"model-clauses", clauses, "protocol clauses valid in the model"});

  std::size_t held = 0;
  for (const auto& rule : rules) {
    const Formula guard = atom(rule.indicator);
    const Formula consequence =
        rule.mode == RuleMode::Necessity ? box(rule.agent, rule.target) : diamond(rule.agent, neg(rule.target));
    held += logic::valid_in_model(m, logic::implies(guard, consequence)) ? 1 : 0;
  }
  rep.checks.push_back({"model-rules", held == rules.size(),
                        pass_count(held, rules.size()) + " bridge rules hold by evaluation"});

  bool disjoint = true;
  auto world_of = [&](std::size_t c) -> std::optional<std::size_t> {
    auto it = std::find(r.candidate_of_world.begin(), r.candidate_of_world.end(), c);
    if (it == r.candidate_of_world.end()) return std::nullopt;
    return static_cast<std::size_t>(it - r.candidate_of_world.begin());
  };
  for (const auto& f : spec.forbidden) {
    const auto a = world_of(f.from), b = world_of(f.to);
    if (a && b && m.frame().relation(f.agent)(static_cast<Eigen::Index>(*a), static_cast<Eigen::Index>(*b)))
      disjoint = false;
  }
  rep.checks.push_back({"model-y-disjoint", disjoint,
                        "no relation meets the forbidden set Y (" + std::to_string(spec.forbidden.size()) + " pairs)"});

  if (r.point) {
    const bool fr = logic::satisfies(m, *r.point, protocol_clauses().phi_fr);
    rep.checks.push_back({"model-point", fr, "the point satisfies a=1, g=1, c=ok, d=ok"});
  }
}

Verdict expected_ablation(Drop drop, FrameChoice frame) {
  switch (drop) {
    case Drop::None:
      return Verdict::Contradiction;
    case Drop::UForA:
    case Drop::StarNecessity:
      return Verdict::Sat;
    case Drop::StarWitness:
      return frame == FrameChoice::Reflexive ? Verdict::Contradiction : Verdict::Sat;
  }
  return Verdict::Sat;
}

Formula s_instance(const std::string& agent, const std::string& o) {
  return neg(conj(box(agent, atom(o)), box(agent, neg(atom(o)))));
}

const std::vector<std::string>& measurement_atoms() {
  static const std::vector<std::string> xs{atoms::a0,   atoms::a1,     atoms::g0,   atoms::g1,
                                           atoms::c_ok, atoms::c_fail, atoms::d_ok, atoms::d_fail};
  return xs;
}

}  // namespace

ScenarioReport run_lemma1(double tol) {
  const logic::KripkeModel skeleton = build_worlds();
  ScenarioReport rep;
  rep.run = "lemma1";
  rep.frame = "reflexive, serial";
  rep.claim = "~([x]O & [x]~O) for every agent x and measurement atom O";
  rep.expected = Verdict::Unsat;

  std::vector<Formula> instances;
  for (const auto& x : fr_agents())
    for (const auto& o : measurement_atoms()) instances.push_back(s_instance(x, o));

  bool all_unsat = true;
  for (FrameChoice frame : {FrameChoice::Reflexive, FrameChoice::Serial}) {
    std::size_t valid = 0;
    bool checked = true;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      logic::ModelSpec spec = fixed_base(skeleton);
      for (const auto& a : fr_agents()) spec.frame_properties[a] = {property_of(frame)};
      spec.somewhere.push_back({"counterexample", neg(instances[i])});
      const logic::FindResult r = logic::find_model(spec);
      if (!r.sat()) ++valid;
      checked = checked && (r.sat() || r.refutation_checked);
    }
    all_unsat = all_unsat && valid == instances.size();
    rep.checks.push_back({std::string("valid-") + to_string(frame), valid == instances.size() && checked,
                          pass_count(valid, instances.size()) + " S-instances have no countermodel among " +
                              to_string(frame) + " completions"});

    logic::ModelSpec spec = fixed_base(skeleton);
    for (const auto& a : fr_agents()) spec.frame_properties[a] = {property_of(frame)};
    std::vector<Formula> negs;
    for (const auto& s : instances) negs.push_back(neg(s));
    spec.somewhere.push_back({"counterexample", logic::disj_all(negs)});
    rep.searches.push_back(summarize(std::string("countermodel-") + to_string(frame),
                                     std::string("some S-instance fails somewhere, ") + to_string(frame) + " frames",
                                     spec, logic::find_model(spec)));
  }

  // The skeleton itself, with no relations: every box is vacuously true, so
  // each S-instance is false everywhere. No frame condition admits it.
  std::size_t false_everywhere = 0;
  for (const auto& s : instances) false_everywhere += logic::extension(skeleton, s).any() ? 0 : 1;
  const bool excluded = !logic::check_frame_property(skeleton.frame(), FrameProperty::Serial).holds;
  rep.checks.push_back({"degenerate-relation-free", false_everywhere == instances.size() && excluded,
                        "relation-free skeleton: " + pass_count(false_everywhere, instances.size()) +
                            " S-instances false at every world; not serial, so never a completion"});
  rep.notes.push_back(
      "the relation-free skeleton is degenerate: vacuous boxes falsify every S-instance, and it is excluded because "
      "it is not serial");

  Derivation d = protocol_derivation(skeleton, {});
  const std::string o = atoms::d_fail;
  d.derive("L1.1", Scope::Everywhere, P("[d]" + o + " -> " + o), {"frame:reflexive:d"}, "T");
  d.derive("L1.2", Scope::Everywhere, P("[d]~" + o + " -> ~" + o), {"frame:reflexive:d"}, "T");
  d.derive("L1.3", Scope::Everywhere, s_instance("d", o), {"L1.1", "L1.2"}, "O and ~O cannot both hold", "T");
  d.derive("L1.4", Scope::Everywhere, P("[d]" + o + " -> <d>" + o), {"frame:serial:d"}, "D");
  d.derive("L1.5", Scope::Everywhere, s_instance("d", o), {"L1.4"}, "D alone suffices", "D");
  rep.trace = d.steps();
  rep.checks.push_back({"trace-verified", d.all_verified(), "every trace step re-verified"});

  rep.verdict = all_unsat ? Verdict::Unsat : Verdict::Sat;
  (void)tol;
  return rep;
}

ScenarioReport run_lemma2(double tol) {
  (void)tol;
  ScenarioReport rep;
  rep.run = "lemma2";
  rep.frame = "reflexive";
  rep.claim = "[x][y]phi -> [x]phi";
  rep.expected = Verdict::Unsat;

  logic::ModelSpec base;
  base.agents = {"x", "y"};
  base.world_count_max = 4;

  logic::ModelSpec refl = base;
  refl.frame_properties = {{"x", {FrameProperty::Reflexive}}, {"y", {FrameProperty::Reflexive}}};
  refl.at_point.push_back({"counterexample", neg(P("[x][y]phi -> [x]phi"))});
  const logic::FindResult rr = logic::find_model(refl);
  rep.searches.push_back(summarize("countermodel-reflexive", "at most 4 worlds, free valuation, reflexive frames", refl, rr));
  rep.verdict = rr.sat() ? Verdict::Sat : Verdict::Unsat;
  rep.checks.push_back({"valid-reflexive", !rr.sat() && rr.refutation_checked,
                        "no reflexive countermodel with up to 4 worlds"});

  const Formula witness = P("[x][y]phi & <x>~phi");
  logic::ModelSpec weak = base;
  for (const char* a : {"x", "y"})
    weak.frame_properties[a] = {FrameProperty::Serial, FrameProperty::Transitive, FrameProperty::Euclidean};
  weak.at_point.push_back({"countermodel", witness});
  const logic::FindResult wr = logic::find_model(weak);
  rep.searches.push_back(summarize("countermodel-kd45", "at most 4 worlds, serial, transitive, Euclidean", weak, wr));

  auto frame_checks = [&](const std::string& label, const logic::KripkeModel& m, std::size_t point) {
    bool weak_frame = true;
    for (const char* a : {"x", "y"})
      for (FrameProperty p : {FrameProperty::Serial, FrameProperty::Transitive, FrameProperty::Euclidean})
        weak_frame = weak_frame && logic::check_frame_property(m.frame(), p, a).holds;
    const bool reflexive = logic::check_frame_property(m.frame(), FrameProperty::Reflexive).holds;
    rep.checks.push_back({label + "-frame", weak_frame && !reflexive,
                          "serial, transitive and Euclidean for x and y; not reflexive"});
    rep.checks.push_back({label + "-point", logic::satisfies(m, point, witness),
                          "[x][y]phi & <x>~phi true at " + m.frame().worlds()[point]});
    rep.checks.push_back({label + "-size", m.size() == 2, std::to_string(m.size()) + " worlds"});
  };

  if (wr.sat()) {
    rep.model = wr.model;
    rep.point = wr.point;
    frame_checks("countermodel", *wr.model, *wr.point);
  } else {
    rep.checks.push_back({"countermodel-found", false, "no serial, transitive, Euclidean countermodel found"});
  }
  const logic::PointedModel fig1 = fig1_reconstruction();
  frame_checks("fig1", fig1.model, fig1.point);
  rep.notes.push_back("fig1 is a reconstruction: the smallest model with the caption's frame properties");

  logic::ModelSpec trace_base = base;
  Derivation d(trace_base);
  d.derive("L2.1", Scope::Everywhere, P("[y]phi -> phi"), {"frame:reflexive:y"}, "T for y");
  d.derive("L2.2", Scope::Everywhere, P("[x]([y]phi -> phi)"), {"L2.1"}, "necessitation");
  d.derive("L2.3", Scope::Everywhere, P("[x][y]phi -> [x]phi"), {"L2.2"}, "K for x", "C");
  rep.trace = d.steps();
  rep.checks.push_back({"trace-verified", d.all_verified(), "every trace step re-verified"});

  bool t_only = true;
  for (const auto& s : rep.trace)
    for (const auto& p : s.premises)
      if (p.rfind("frame:", 0) == 0 && p.rfind("frame:reflexive:", 0) != 0) t_only = false;
  rep.checks.push_back({"t-only", t_only, "the derivation uses reflexivity and nothing else"});
  return rep;
}

ScenarioReport run_theorem_fr(OutcomeWorld point, double tol) {
  const logic::KripkeModel skeleton = build_worlds();
  const std::vector<BridgeRule> rules = bridge_rules(tol);
  const std::size_t p = point.index();
  const bool hat = point == hat_world();
  // Steps ii and iii hold everywhere, so step iv closes at any point where both
  // Chris and David read ok.
  const bool closes = point.c_ok && point.d_ok;

  ScenarioReport rep;
  rep.run = "theorem-fr";
  rep.frame = "reflexive";
  rep.claim = "no reflexive completion at " + point.name();
  rep.expected = closes ? Verdict::Contradiction : Verdict::Unsat;
  rep.rules = summarize(rules, tol);

  Derivation d = protocol_derivation(skeleton, rules);
  d.set_point(p);
  fr_trace(d);
  rep.trace = d.steps();

  const logic::ModelSpec spec = full_spec(skeleton, rules, FrameChoice::Reflexive, p);
  const logic::FindResult r = logic::find_model(spec);
  rep.searches.push_back(summarize("completion", "16 candidate worlds, reflexive, all rules, point " + point.name(), spec, r));
  rep.verdict = decide(r, rep.trace);

  rep.checks.push_back({"certificate", r.sat() || r.refutation_checked, "refutation passes the RUP check"});
  if (hat) {
    bool steps = true;
    for (const char* m : {"i", "ii", "iii", "iv"}) steps = steps && milestone_verified(rep.trace, m);
    rep.checks.push_back({"steps-i-iv", steps, "steps i, ii, iii and iv re-verified"});
  } else if (closes) {
    rep.checks.push_back({"chain-closes", rep.trace.back().verified && milestone_verified(rep.trace, "iv"),
                          "step iv closes at " + point.name() + " without step i"});
  } else {
    rep.checks.push_back({"chain-breaks", !rep.trace.back().verified,
                          "the chain does not reach a contradiction at " + point.name()});
  }
  if (!hat) {
    const auto first = std::find_if(rep.trace.begin(), rep.trace.end(), [](const TraceStep& s) { return !s.verified; });
    if (first != rep.trace.end()) rep.notes.push_back("first unverified step: " + first->id);
    rep.notes.push_back("witness rules already rule out every reflexive completion, so the search is UNSAT anyway");
  }
  if (r.sat()) {
    rep.model = r.model;
    rep.point = r.point;
    completion_checks(rep, r, spec, rules, FrameChoice::Reflexive);
  }
  common_checks(rep, skeleton, rules, tol);
  rep.notes.push_back(kEigenNote);
  rep.notes.push_back(kCommonNote);
  return rep;
}

ScenarioReport run_theorem_fr_star(double tol) {
  const logic::KripkeModel skeleton = build_worlds();
  const std::vector<BridgeRule> rules = bridge_rules(tol);
  const std::size_t hat = hat_world().index();

  ScenarioReport rep;
  rep.run = "theorem-fr-star";
  rep.frame = "serial";
  rep.claim = "no serial completion";
  rep.expected = Verdict::Contradiction;
  rep.rules = summarize(rules, tol);

  Derivation d = protocol_derivation(skeleton, rules);
  fr_star_trace(d, hat);
  rep.trace = d.steps();

  const logic::ModelSpec spec = full_spec(skeleton, rules, FrameChoice::Serial, std::nullopt);
  const logic::FindResult r = logic::find_model(spec);
  rep.searches.push_back(summarize("completion", "16 candidate worlds, serial, all rules, any point", spec, r));

  logic::ModelSpec single = full_spec(skeleton, rules, FrameChoice::Serial, hat);
  single.allowed = {hat};
  const logic::FindResult rs = logic::find_model(single);
  rep.searches.push_back(summarize("singleton", "W = {" + hat_world().name() + "}, serial, all rules", single, rs));
  rep.verdict = decide(r, rep.trace);

  for (const auto& rule : rules)
    if (rule.mode == RuleMode::Witness)
      rep.checks.push_back({"witness-" + rule.id, std::abs(rule.expectation - 11.0 / 12.0) <= tol,
                            "expectation " + std::to_string(rule.expectation) + " = 11/12, not 1"});
  rep.checks.push_back({"certificate", r.sat() || r.refutation_checked, "refutation passes the RUP check"});
  rep.checks.push_back({"singleton-unsat", !rs.sat(), "W = {" + hat_world().name() + "} has no serial completion"});
  rep.checks.push_back({"steps-I-II", milestone_verified(rep.trace, "I") && milestone_verified(rep.trace, "II"),
                        "steps I and II re-verified"});
  if (r.sat()) {
    rep.model = r.model;
    rep.point = r.point;
    completion_checks(rep, r, spec, rules, FrameChoice::Serial);
  }
  common_checks(rep, skeleton, rules, tol);
  rep.notes.push_back(kEigenNote);
  rep.notes.push_back(kCommonNote);
  return rep;
}

ScenarioReport ablate(Drop drop, FrameChoice frame, double tol) {
  const logic::KripkeModel skeleton = build_worlds();
  const std::vector<BridgeRule> all = bridge_rules(tol);
  const std::vector<BridgeRule> rules = kept_rules(drop, tol);
  const std::size_t hat = hat_world().index();

  ScenarioReport rep;
  rep.run = std::string("ablate-") + to_string(drop);
  rep.frame = to_string(frame);
  rep.claim = std::string("completion at ") + hat_world().name() + " without " + to_string(drop);
  rep.expected = expected_ablation(drop, frame);
  rep.rules = summarize(rules, tol);
  for (const auto& r : all)
    if (std::none_of(rules.begin(), rules.end(), [&](const BridgeRule& k) { return k.id == r.id; }))
      rep.notes.push_back("dropped rule " + r.id);

  Derivation d = protocol_derivation(skeleton, rules);
  if (frame == FrameChoice::Reflexive) {
    d.set_point(hat);
    fr_trace(d);
  } else {
    fr_star_trace(d, hat);
  }
  rep.trace = d.steps();

  const logic::ModelSpec spec = full_spec(skeleton, rules, frame, hat);
  const logic::FindResult r = logic::find_model(spec);
  rep.searches.push_back(summarize("completion",
                                   std::string("16 candidate worlds, ") + to_string(frame) + ", point " +
                                       hat_world().name() + ", " + std::to_string(rules.size()) + " rules",
                                   spec, r));
  rep.verdict = decide(r, rep.trace);
  rep.checks.push_back({"certificate", r.sat() || r.refutation_checked, "refutation passes the RUP check"});
  if (r.sat()) {
    rep.model = r.model;
    rep.point = r.point;
    completion_checks(rep, r, spec, rules, frame);
  }
  common_checks(rep, skeleton, rules, tol);
  return rep;
}

}  // namespace frlogic::scenario
