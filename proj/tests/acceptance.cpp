// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frlogic/cli/cli.hpp"
#include "frlogic/halpern/structure.hpp"
#include "frlogic/logic/kripke.hpp"
#include "frlogic/logic/model_io.hpp"
#include "frlogic/quantum/protocol.hpp"
#include "frlogic/scenario/bridge.hpp"
#include "frlogic/scenario/protocol_model.hpp"
#include "frlogic/scenario/runs.hpp"
#include "support/generators.hpp"

namespace {

using namespace frlogic;
using logic::Formula;
using logic::KripkeModel;
using scenario::ScenarioReport;
using scenario::Verdict;
using testing::pick;

// Pinned tolerances and sample sizes.
constexpr double kTol = 1e-9;
constexpr std::size_t kStructures = 1000;
constexpr std::size_t kProbes = 20;
constexpr std::size_t kMaxWorlds = 6;
constexpr std::size_t kSoundnessSamples = 200;
constexpr std::size_t kCorrespondenceModels = 500;

const std::vector<std::string> kAgents{"x", "y"};
const std::vector<std::string> kAtoms{"p", "q", "r"};

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<Formula> probes(std::mt19937& rng, std::size_t n) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(testing::random_formula(rng, 3, kAtoms, kAgents));
  return out;
}

// The randomized corpus shared by criteria 3 and 4.
struct Corpus {
  std::vector<halpern::ProbabilityStructure> structures;
  std::vector<std::vector<Formula>> probes;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    std::mt19937 rng(2024);
    Corpus out;
    for (std::size_t i = 0; i < kStructures; ++i) {
      out.structures.push_back(testing::random_structure(rng, 1 + pick(rng, kMaxWorlds), kAgents, kAtoms));
      out.probes.push_back(probes(rng, kProbes));
    }
    return out;
  }();
  return c;
}

bool near(double a, double b) { return std::abs(a - b) <= kTol; }

// Hand loops over the relation, independent of check_frame_property and satisfies.
bool reflexive(const logic::Relation& r) {
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (!r(i, i)) return false;
  return true;
}

bool serial(const logic::Relation& r) {
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (!r.row(i).any()) return false;
  return true;
}

bool transitive(const logic::Relation& r) {
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.rows(); ++j)
      for (Eigen::Index k = 0; k < r.rows(); ++k)
        if (r(i, j) && r(j, k) && !r(i, k)) return false;
  return true;
}

bool euclidean(const logic::Relation& r) {
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.rows(); ++j)
      for (Eigen::Index k = 0; k < r.rows(); ++k)
        if (r(i, j) && r(i, k) && !r(j, k)) return false;
  return true;
}

// --- criteria -----------------------------------------------------------------------

Outcome quantum_values() {
  const quantum::AppendixValues v = quantum::appendix_values(kTol);
  const bool ok = near(v.a1, 0) && near(v.a2_joint, 1.0 / 12) && near(v.a2_complement, 11.0 / 12) && near(v.a3, 0) &&
                  near(v.a4_fail, 1) && near(v.a4_not_ok, 1);
  std::ostringstream s;
  s << std::setprecision(12) << "A1=" << v.a1 << " A2=" << v.a2_joint << " A2c=" << v.a2_complement << " A3=" << v.a3
    << " A4fail=" << v.a4_fail << " A4notok=" << v.a4_not_ok;
  return {ok, s.str()};
}

Outcome unitaries() {
  const quantum::FrUnitaries u = quantum::fr_unitaries();
  bool ok = true;
  for (const quantum::DenseOperator* op : {&u.U_t1, &u.U_tprime, &u.U_t2}) {
    const Eigen::MatrixXcd m = op->entries();
    const auto id = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    ok = ok && (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= kTol && (m * m.adjoint() - id).cwiseAbs().maxCoeff() <= kTol &&
         (m - m.adjoint()).cwiseAbs().maxCoeff() <= kTol;
  }
  const Eigen::MatrixXcd a = u.U_a.entries();
  const auto id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  const bool ua = (a.adjoint() * a - id).cwiseAbs().maxCoeff() <= kTol && (a * a.adjoint() - id).cwiseAbs().maxCoeff() <= kTol;
  const Eigen::VectorXcd image =
      a * quantum::tensor(quantum::ket_plus("l"), quantum::ket0("g")).amplitudes();
  const double dist = (image - quantum::ket_fail("l", "g").amplitudes()).norm();
  return {ok && ua && dist <= kTol,
          "U_t1, U_t', U_t2 unitary and self-adjoint; U_a unitary; |U_a|+0> - |fail>| = " + std::to_string(dist)};
}

Outcome semantics_agree() {
  std::size_t evaluations = 0, disagreements = 0;
  const Corpus& c = corpus();
  for (std::size_t i = 0; i < c.structures.size(); ++i)
    for (const Formula& f : c.probes[i])
      for (const auto& a : kAgents) {
        ++evaluations;
        if (halpern::certain(c.structures[i], a, f, kTol) != halpern::certain_prime(c.structures[i], a, f, kTol))
          ++disagreements;
      }
  return {disagreements == 0 && c.structures.size() >= 1000,
          std::to_string(c.structures.size()) + " structures, " + std::to_string(evaluations) + " evaluations, " +
              std::to_string(disagreements) + " disagreements"};
}

Outcome false_beliefs_null() {
  double worst = 0;
  std::size_t nonempty = 0;
  const Corpus& c = corpus();
  for (std::size_t i = 0; i < c.structures.size(); ++i)
    for (const auto& a : kAgents) {
      const halpern::FalseBeliefSet f = halpern::false_beliefs(c.structures[i], a, c.probes[i], kTol);
      worst = std::max(worst, f.measure);
      nonempty += f.worlds.any() ? 1 : 0;
    }
  return {worst <= kTol, "max p_x(F_x) = " + std::to_string(worst) + " over " +
                             std::to_string(c.structures.size() * kAgents.size()) + " sets (" +
                             std::to_string(nonempty) + " nonempty)"};
}

Outcome soundness() {
  std::mt19937 rng(7);
  std::vector<halpern::GeneralizedProbabilityStructure> n0, n1;
  for (std::size_t i = 0; i < kSoundnessSamples; ++i) {
    n0.push_back(halpern::generalize(testing::random_structure(rng, 1 + pick(rng, kMaxWorlds), kAgents, kAtoms)));
    n1.push_back(halpern::generalize(testing::random_structure(rng, 1 + pick(rng, kMaxWorlds), kAgents, kAtoms, true)));
  }
  const auto ps = probes(rng, 6);
  const halpern::SoundnessReport kd45 = halpern::soundness_probe(halpern::System::KD45, halpern::StructureClass::N0, n0, ps, kTol);
  const halpern::SoundnessReport s5 = halpern::soundness_probe(halpern::System::S5, halpern::StructureClass::N1, n1, ps, kTol);

  // Two worlds, all weight on w0, phi false at w1: in N0 but not N1.
  KripkeModel m{logic::KripkeFrame({"w0", "w1"}, {"x"})};
  m.set_atom_at("phi", 0, true);
  m.set_atom_at("phi", 1, false);
  const auto counter = halpern::generalize(halpern::ProbabilityStructure(m, {{"x", Eigen::Vector2d(1, 0)}}));
  const halpern::SoundnessReport t =
      halpern::soundness_probe(halpern::System::T, halpern::StructureClass::N0, {counter}, {logic::parse("phi")}, kTol);
  const bool separated = !halpern::in_class(counter, halpern::StructureClass::N1, kTol) && !t.all_hold();
  return {kd45.all_hold() && s5.all_hold() && separated,
          "KD45 " + std::to_string(kd45.instances_checked) + " instances on N0, " + std::to_string(kd45.failures.size()) +
              " failures; S5 " + std::to_string(s5.instances_checked) + " on N1, " + std::to_string(s5.failures.size()) +
              " failures; T fails on the N0 counterexample: " + (separated ? "yes" : "no")};
}

Outcome correspondence() {
  std::mt19937 rng(11);
  const std::vector<std::pair<logic::FrameProperty, logic::AxiomSchema>> pairs{
      {logic::FrameProperty::Reflexive, logic::AxiomSchema::T},
      {logic::FrameProperty::Serial, logic::AxiomSchema::D},
      {logic::FrameProperty::Transitive, logic::AxiomSchema::Four},
      {logic::FrameProperty::Euclidean, logic::AxiomSchema::Five}};
  std::size_t instances = 0, violations = 0;
  for (const auto& [prop, schema] : pairs)
    for (std::size_t i = 0; i < kCorrespondenceModels; ++i) {
      KripkeModel m = testing::random_model(rng, 1 + pick(rng, kMaxWorlds), kAgents, kAtoms);
      for (const auto& x : kAgents) testing::close_under(rng, m.frame().relation(x), prop);
      const logic::AxiomReport r = logic::axiom_validity(m, schema, probes(rng, 4));
      instances += r.instances_checked;
      violations += r.failures.size();
    }
  return {violations == 0, std::to_string(kCorrespondenceModels) + " models per property, " + std::to_string(instances) +
                               " instances, " + std::to_string(violations) + " violations"};
}

// Evaluates [x][y]phi & <x>~phi at w by hand.
bool caption_formula(const KripkeModel& m, std::size_t w) {
  const auto& rx = m.frame().relation("x");
  const auto& ry = m.frame().relation("y");
  const auto& phi = m.atom("phi");
  bool boxes = true, diamond = false;
  for (Eigen::Index v = 0; v < rx.cols(); ++v) {
    if (!rx(static_cast<Eigen::Index>(w), v)) continue;
    diamond = diamond || !phi(v);
    for (Eigen::Index u = 0; u < ry.cols(); ++u)
      if (ry(v, u) && !phi(u)) boxes = false;
  }
  return boxes && diamond;
}

Outcome lemmas() {
  const ScenarioReport l1 = scenario::run_lemma1(kTol);
  const ScenarioReport l2 = scenario::run_lemma2(kTol);
  bool model_ok = false;
  std::string size = "none";
  if (l2.model && l2.point) {
    const KripkeModel& m = *l2.model;
    size = std::to_string(m.size());
    model_ok = m.size() == 2 && caption_formula(m, *l2.point);
    for (const auto& a : m.frame().agents()) {
      const auto& r = m.frame().relation(a);
      model_ok = model_ok && serial(r) && transitive(r) && euclidean(r);
    }
    model_ok = model_ok && !reflexive(m.frame().relation("y"));
  }
  return {l1.as_expected() && l2.as_expected() && model_ok,
          "lemma1 " + std::string(to_string(l1.verdict)) + ", lemma2 " + to_string(l2.verdict) + ", countermodel " + size +
              " worlds, caption formula and frame properties by hand: " + (model_ok ? "yes" : "no")};
}

const scenario::TraceStep* step(const ScenarioReport& r, const std::string& id) {
  for (const auto& s : r.trace)
    if (s.id == id) return &s;
  return nullptr;
}

bool step_is(const ScenarioReport& r, const std::string& id, const std::string& claim) {
  const scenario::TraceStep* s = step(r, id);
  return s && s->verified && logic::to_string(s->claim) == claim;
}

Outcome theorem_fr() {
  const ScenarioReport r = scenario::run_theorem_fr(scenario::hat_world(), kTol);
  const bool unsat = !r.searches.empty() && !r.searches.front().sat;
  const bool steps = step_is(r, "i.6", "[a]M[d,t4]=fail") && step_is(r, "ii.8", "M[g,t2]=1 -> [g]M[d,t4]=fail") &&
                     step_is(r, "iii.5", "M[c,t3]=ok -> [c]M[d,t4]=fail") &&
                     step_is(r, "iv.9", "[d]M[d,t4]=fail & [d]~M[d,t4]=fail");
  return {r.verdict == Verdict::Contradiction && unsat && steps && r.checks_pass(),
          std::string("verdict ") + to_string(r.verdict) + ", search " + (unsat ? "UNSAT" : "SAT") +
              ", steps i-iv re-verified: " + (steps ? "yes" : "no")};
}

Outcome theorem_fr_star() {
  const ScenarioReport r = scenario::run_theorem_fr_star(kTol);
  bool witness = false;
  for (const auto& rule : r.rules) witness = witness || (rule.mode == scenario::RuleMode::Witness && near(rule.recomputed, 11.0 / 12));
  const bool closing = !r.trace.empty() && r.trace.back().verified &&
                       logic::to_string(r.trace.back().claim) == "M[d,t4]=ok & ~M[d,t4]=ok" &&
                       r.trace.back().point == scenario::hat_world().index();
  return {r.verdict == Verdict::Contradiction && witness && closing && r.checks_pass(),
          std::string("verdict ") + to_string(r.verdict) + ", witness rule at 11/12: " + (witness ? "yes" : "no") +
              ", ok_d & ~ok_d at " + scenario::hat_world().name() + ": " + (closing ? "yes" : "no")};
}

int run(const std::vector<std::string>& args, std::string& output) {
  std::vector<const char*> argv{"frlogic"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  output = out.str();
  return code;
}

Outcome ablation_flip() {
  std::string text;
  const int code = run({"--format", "machine", "--no-timestamp", "fr-ablate", "--drop", "u-a"}, text);
  if (code != cli::kExitExpected) return {false, "fr-ablate exited " + std::to_string(code)};
  const logic::ModelDocument doc(text);
  if (doc.root().value("verdict", "") != "SAT") return {false, "verdict " + doc.root().value("verdict", "?")};
  const logic::LoadedModel loaded = logic::read_model(
      doc, {"run", "frame", "claim", "verdict", "expected", "trace", "checks", "rules", "searches", "notes"});
  const KripkeModel& m = loaded.model;

  bool frames = true;
  for (const auto& a : scenario::fr_agents()) frames = frames && reflexive(m.frame().relation(a));
  bool clauses = true;
  for (const auto& [id, f] : scenario::protocol_clauses().named()) clauses = clauses && logic::valid_in_model(m, f);
  // Every remaining rule, checked world by world over the emitted relations.
  std::size_t kept = 0;
  bool rules = true;
  for (const auto& rule : scenario::bridge_rules(kTol)) {
    if (scenario::uses_amanda_unitary(rule)) continue;
    ++kept;
    const auto& rel = m.frame().relation(rule.agent);
    for (std::size_t w = 0; w < m.size(); ++w) {
      if (!logic::satisfies(m, w, logic::atom(rule.indicator))) continue;
      bool all = true, some_violator = false;
      for (std::size_t v = 0; v < m.size(); ++v) {
        if (!rel(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(v))) continue;
        const bool holds = logic::satisfies(m, v, rule.target);
        all = all && holds;
        some_violator = some_violator || !holds;
      }
      rules = rules && (rule.mode == scenario::RuleMode::Necessity ? all : some_violator);
    }
  }
  const bool point = loaded.point && m.frame().worlds()[*loaded.point] == scenario::hat_world().name() &&
                     logic::satisfies(m, *loaded.point, scenario::protocol_clauses().phi_fr);
  return {frames && clauses && rules && point,
          "SAT, emitted model " + std::to_string(m.size()) + " worlds; reflexive " + (frames ? "yes" : "no") +
              ", clauses " + (clauses ? "yes" : "no") + ", " + std::to_string(kept) + " kept rules " +
              (rules ? "hold" : "fail") + ", point " + (point ? "ok" : "wrong")};
}

Outcome determinism() {
  const std::vector<std::string> args{"--format", "machine", "--no-timestamp", "fr-run", "--run", "all"};
  std::string first, second;
  const int c1 = run(args, first);
  const int c2 = run(args, second);
  return {c1 == cli::kExitExpected && c2 == cli::kExitExpected && !first.empty() && first == second,
          std::to_string(first.size()) + " bytes, exit codes " + std::to_string(c1) + "/" + std::to_string(c2) +
              (first == second ? ", identical" : ", differ")};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{quantum_values, unitaries,   semantics_agree, false_beliefs_null,
                                                       soundness,      correspondence, lemmas,       theorem_fr,
                                                       theorem_fr_star, ablation_flip, determinism};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
