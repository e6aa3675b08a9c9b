#include "frlogic/cli/cli.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frlogic/halpern/structure.hpp"
#include "frlogic/halpern/structure_io.hpp"
#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/kripke.hpp"
#include "frlogic/logic/model_finder.hpp"
#include "frlogic/logic/model_io.hpp"
#include "frlogic/quantum/protocol.hpp"
#include "frlogic/scenario/runs.hpp"
#include "frlogic/tolerance.hpp"

namespace frlogic::cli {

namespace {

using nlohmann::ordered_json;

/// A malformed argument detected after parsing; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Global {
  double tolerance = kDefaultTolerance;
  std::string format = "text";
  bool no_timestamp = false;

  bool machine() const { return format == "machine"; }
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream s;
  s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// Writes a result; the timestamp is a header line in text and a leading key
// in machine output.
void emit(const Global& g, std::ostream& out, const std::string& text, ordered_json doc) {
  if (g.machine()) {
    if (!g.no_timestamp) {
      ordered_json stamped;
      stamped["generated"] = timestamp();
      for (auto& [k, v] : doc.items()) stamped[k] = v;
      doc = std::move(stamped);
    }
    out << doc.dump(2) << "\n";
  } else {
    if (!g.no_timestamp) out << "# generated " << timestamp() << "\n";
    out << text;
  }
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

std::size_t world_by_name(const logic::KripkeFrame& f, const std::string& name) {
  if (auto w = f.find_world(name)) return *w;
  throw UsageError("unknown world '" + name + "'");
}

// --- eval -----------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string world;
  std::string formula;
};

int run_eval(const Global& g, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const logic::ModelDocument doc(logic::read_text_file(a.model));
  const logic::Formula f = logic::parse(a.formula);
  ordered_json j;
  j["formula"] = logic::to_string(f);

  bool value = false;
  std::string world;
  if (halpern::is_structure_document(doc)) {
    const halpern::LoadedStructure loaded = halpern::read_structure(doc, g.tolerance);
    const auto& frame = std::visit([](const auto& s) -> const logic::KripkeFrame& { return s.valuation().frame(); },
                                   loaded.structure);
    if (a.world.empty() && !loaded.point) throw UsageError("no --world given and the file has no point");
    const std::size_t w = a.world.empty() ? *loaded.point : world_by_name(frame, a.world);
    world = frame.worlds()[w];
    // Both semantics: probability-one certainty, and truth on the support.
    const auto [dagger, prime] = std::visit(
        [&](const auto& s) {
          return std::pair{halpern::extension(s, f, g.tolerance)(static_cast<Eigen::Index>(w)),
                           logic::satisfies(halpern::induced_kripke(s, g.tolerance), w, f)};
        },
        loaded.structure);
    if (dagger != prime) {
      err << "error: the two certainty semantics disagree at " << world << "\n";
      return kExitUnexpected;
    }
    value = dagger;
    j["semantics"] = "probability";
  } else {
    const logic::LoadedModel loaded = logic::read_model(doc);
    if (a.world.empty() && !loaded.point) throw UsageError("no --world given and the file has no point");
    const std::size_t w = a.world.empty() ? *loaded.point : world_by_name(loaded.model.frame(), a.world);
    world = loaded.model.frame().worlds()[w];
    value = logic::satisfies(loaded.model, w, f);
    j["semantics"] = "kripke";
  }
  j["world"] = world;
  j["value"] = value;
  emit(g, out, std::string(value ? "true" : "false") + "\n", j);
  return value ? kExitExpected : kExitUnexpected;
}

// --- check-frame ------------------------------------------------------------------

struct CheckFrameArgs {
  std::string model;
  std::vector<std::string> agents;
  std::vector<std::string> require;
};

logic::FrameProperty property_or_usage(const std::string& s) {
  if (auto p = logic::frame_property_from_string(s)) return *p;
  throw UsageError("unknown frame property '" + s + "'");
}

int run_check_frame(const Global& g, const CheckFrameArgs& a, std::ostream& out) {
  const logic::ModelDocument doc(logic::read_text_file(a.model));
  logic::KripkeModel m;
  if (halpern::is_structure_document(doc)) {
    const auto loaded = halpern::read_structure(doc, g.tolerance);
    m = std::visit([&](const auto& s) { return halpern::induced_kripke(s, g.tolerance); }, loaded.structure);
  } else {
    m = logic::read_model(doc).model;
  }
  std::vector<logic::FrameProperty> required;
  for (const auto& r : a.require) required.push_back(property_or_usage(r));
  std::vector<std::string> agents = a.agents.empty() ? m.frame().agents() : a.agents;
  for (const auto& ag : agents)
    if (!m.frame().has_agent(ag)) throw UsageError("unknown agent '" + ag + "'");

  bool ok = true;
  std::ostringstream text;
  ordered_json j = ordered_json::object();
  for (const auto& ag : agents) {
    ordered_json per = ordered_json::object();
    text << ag << ":";
    for (logic::FrameProperty p : logic::all_frame_properties()) {
      const logic::FrameCheck c = logic::check_frame_property(m.frame(), p, ag);
      text << " " << logic::to_string(p) << "=" << (c.holds ? "yes" : "no");
      ordered_json entry;
      entry["holds"] = c.holds;
      if (!c.holds) {
        std::vector<std::string> names;
        for (std::size_t w : c.witness) names.push_back(m.frame().worlds()[w]);
        entry["witness"] = names;
        std::string joined;
        for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
        text << "(" << joined << ")";
      }
      per[logic::to_string(p)] = entry;
      if (!c.holds && std::find(required.begin(), required.end(), p) != required.end()) ok = false;
    }
    text << "\n";
    j[ag] = per;
  }
  emit(g, out, text.str(), ordered_json{{"agents", j}, {"required_hold", ok}});
  return ok ? kExitExpected : kExitUnexpected;
}

// --- find-model -------------------------------------------------------------------

struct FindModelArgs {
  std::vector<std::string> agents;
  std::size_t max_worlds = 4;
  std::string model;
  std::string point;
  std::vector<std::string> frames;
  std::vector<std::string> valid;
  std::vector<std::string> at_point;
  std::vector<std::string> somewhere;
  std::string expect;
  unsigned split = 0;
};

int run_find_model(const Global& g, const FindModelArgs& a, std::ostream& out) {
  logic::ModelSpec spec;
  spec.parallel_split = a.split;
  if (!a.model.empty()) {
    const logic::LoadedModel loaded = logic::load_model_file(a.model);
    spec.agents = loaded.model.frame().agents();
    spec.point = a.point.empty() ? loaded.point : std::optional(world_by_name(loaded.model.frame(), a.point));
    spec.candidates = loaded.model;
  } else {
    if (!a.point.empty()) throw UsageError("--point needs --model");
    if (a.agents.empty()) throw UsageError("--agents or --model is required");
    spec.agents = a.agents;
    spec.world_count_max = a.max_worlds;
  }
  for (const auto& f : a.frames) {
    const auto colon = f.find(':');
    if (colon == std::string::npos) {
      for (const auto& ag : spec.agents) spec.frame_properties[ag].push_back(property_or_usage(f));
    } else {
      spec.frame_properties[f.substr(0, colon)].push_back(property_or_usage(f.substr(colon + 1)));
    }
  }
  auto add = [](std::vector<logic::LabeledFormula>& dst, const std::vector<std::string>& src, const char* prefix) {
    for (std::size_t i = 0; i < src.size(); ++i)
      dst.push_back({std::string(prefix) + std::to_string(i + 1), logic::parse(src[i])});
  };
  add(spec.validities, a.valid, "valid");
  add(spec.at_point, a.at_point, "at-point");
  add(spec.somewhere, a.somewhere, "somewhere");

  const logic::FindResult r = logic::find_model(spec);
  std::ostringstream text;
  ordered_json j;
  j["result"] = r.sat() ? "SAT" : "UNSAT";
  if (r.sat()) {
    text << "SAT (" << r.model->size() << " worlds)\n" << logic::serialize_model(*r.model, r.point);
    const ordered_json model = logic::model_to_json(*r.model, r.point);
    for (const auto& [k, v] : model.items()) j[k] = v;
  } else {
    text << "UNSAT up to " << r.bound << " worlds, refutation " << (r.refutation_checked ? "checked" : "NOT checked")
         << "\ncore:";
    for (const auto& c : r.core) text << " " << c;
    text << "\n";
    j["bound"] = r.bound;
    j["refutation_checked"] = r.refutation_checked;
    j["core"] = r.core;
    j["conflicts"] = r.stats.conflicts;
  }
  emit(g, out, text.str(), j);
  if (a.expect.empty()) return kExitExpected;
  return (a.expect == "sat") == r.sat() ? kExitExpected : kExitUnexpected;
}

// --- quantum-verify ---------------------------------------------------------------

int run_quantum_verify(const Global& g, std::ostream& out) {
  const quantum::AppendixValues v = quantum::appendix_values(g.tolerance);
  const std::vector<std::tuple<std::string, double, double, std::string>> rows{
      {"A1", v.a1, 0.0, "0"},
      {"A2 joint", v.a2_joint, 1.0 / 12.0, "1/12"},
      {"A2 complement", v.a2_complement, 11.0 / 12.0, "11/12"},
      {"A3", v.a3, 0.0, "0"},
      {"A4 fail", v.a4_fail, 1.0, "1"},
      {"A4 not ok", v.a4_not_ok, 1.0, "1"},
  };
  bool ok = true;
  std::ostringstream text;
  ordered_json values = ordered_json::array();
  for (const auto& [name, got, want, label] : rows) {
    const bool pass = std::abs(got - want) <= g.tolerance;
    ok = ok && pass;
    text << std::left << std::setw(14) << name << " " << fixed(got) << "  expected " << label << "  "
         << (pass ? "ok" : "FAIL") << "\n";
    values.push_back({{"name", name}, {"value", got}, {"expected", label}, {"within_tolerance", pass}});
  }

  const quantum::FrUnitaries u = quantum::fr_unitaries();
  ordered_json unitaries = ordered_json::array();
  const std::vector<std::pair<std::string, const quantum::DenseOperator*>> named{
      {"U_t1", &u.U_t1}, {"U_t'", &u.U_tprime}, {"U_t2", &u.U_t2}};
  for (const auto& [name, op] : named) {
    const bool unitary = quantum::is_unitary(*op, g.tolerance);
    const bool hermitian = quantum::is_hermitian(*op, g.tolerance);
    ok = ok && unitary && hermitian;
    text << std::left << std::setw(14) << name << " unitary=" << (unitary ? "yes" : "no")
         << " self-adjoint=" << (hermitian ? "yes" : "no") << "\n";
    unitaries.push_back({{"name", name}, {"unitary", unitary}, {"self_adjoint", hermitian}});
  }
  const bool ua_unitary = quantum::is_unitary(u.U_a, g.tolerance);
  const quantum::StateVector image = quantum::evolve(u.U_a, quantum::tensor(quantum::ket_plus("l"), quantum::ket0("g")));
  const double distance = (image.amplitudes() - quantum::ket_fail("l", "g").amplitudes()).norm();
  const bool maps = distance <= g.tolerance;
  ok = ok && ua_unitary && maps;
  text << std::left << std::setw(14) << "U_a" << " unitary=" << (ua_unitary ? "yes" : "no")
       << " |+,0> -> |fail>=" << (maps ? "yes" : "no") << "\n";
  unitaries.push_back({{"name", "U_a"}, {"unitary", ua_unitary}, {"maps_plus0_to_fail", maps}, {"distance", distance}});

  emit(g, out, text.str(), ordered_json{{"values", values}, {"unitaries", unitaries}, {"all_pass", ok}});
  return ok ? kExitExpected : kExitUnexpected;
}

// --- fr-run / fr-ablate -----------------------------------------------------------

int emit_reports(const Global& g, const std::vector<scenario::ScenarioReport>& reports, std::ostream& out) {
  bool ok = true;
  std::string text;
  ordered_json doc;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    ok = ok && reports[i].as_expected();
    if (i) text += "\n----\n\n";
    text += scenario::render_text(reports[i]);
  }
  if (reports.size() == 1) {
    doc = scenario::to_json(reports.front());
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(scenario::to_json(r));
    doc["reports"] = std::move(arr);
  }
  emit(g, out, text, std::move(doc));
  return ok ? kExitExpected : kExitUnexpected;
}

scenario::FrameChoice frame_or_usage(const std::string& s) {
  if (auto f = scenario::frame_choice_from_string(s)) return *f;
  throw UsageError("unknown frame '" + s + "'");
}

struct FrRunArgs {
  std::string run = "theorem";
  std::string frame = "reflexive";
  std::string point;
};

int run_fr(const Global& g, const FrRunArgs& a, std::ostream& out) {
  const scenario::FrameChoice frame = frame_or_usage(a.frame);
  std::optional<scenario::OutcomeWorld> point;
  if (!a.point.empty()) {
    point = scenario::OutcomeWorld::parse(a.point);
    if (!point) throw UsageError("unknown outcome world '" + a.point + "'");
    if (frame != scenario::FrameChoice::Reflexive || a.run != "theorem")
      throw UsageError("--point applies to the reflexive theorem run only");
  }
  const double tol = g.tolerance;
  std::vector<scenario::ScenarioReport> reports;
  if (a.run == "lemma1") {
    reports.push_back(scenario::run_lemma1(tol));
  } else if (a.run == "lemma2") {
    reports.push_back(scenario::run_lemma2(tol));
  } else if (a.run == "theorem") {
    reports.push_back(frame == scenario::FrameChoice::Reflexive
                          ? scenario::run_theorem_fr(point.value_or(scenario::hat_world()), tol)
                          : scenario::run_theorem_fr_star(tol));
  } else {
    reports.push_back(scenario::run_lemma1(tol));
    reports.push_back(scenario::run_lemma2(tol));
    reports.push_back(scenario::run_theorem_fr(scenario::hat_world(), tol));
    reports.push_back(scenario::run_theorem_fr({1, 1, true, false}, tol));
    reports.push_back(scenario::run_theorem_fr_star(tol));
    for (scenario::Drop d : {scenario::Drop::None, scenario::Drop::UForA, scenario::Drop::StarNecessity,
                             scenario::Drop::StarWitness})
      for (scenario::FrameChoice f : {scenario::FrameChoice::Reflexive, scenario::FrameChoice::Serial})
        reports.push_back(scenario::ablate(d, f, tol));
  }
  return emit_reports(g, reports, out);
}

struct FrAblateArgs {
  std::string drop;
  std::string frame = "reflexive";
};

int run_fr_ablate(const Global& g, const FrAblateArgs& a, std::ostream& out) {
  const auto drop = scenario::drop_from_string(a.drop);
  if (!drop) throw UsageError("unknown condition '" + a.drop + "'");
  return emit_reports(g, {scenario::ablate(*drop, frame_or_usage(a.frame), g.tolerance)}, out);
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modal-logic, probabilistic-certainty and quantum checks of the extended Wigner's-friend protocol", "frlogic"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Global g;
  app.add_option("--tolerance", g.tolerance, "comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
  app.add_flag("--no-timestamp", g.no_timestamp, "omit the generated-at header");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula at a world of a model or probability structure");
  eval_cmd->add_option("--model", eval.model, "model or structure file")->required();
  eval_cmd->add_option("--world", eval.world, "world name; defaults to the file's point");
  eval_cmd->add_option("formula", eval.formula, "formula")->required();

  CheckFrameArgs cf;
  auto* cf_cmd = app.add_subcommand("check-frame", "report the frame properties of each agent");
  cf_cmd->add_option("--model", cf.model, "model or structure file")->required();
  cf_cmd->add_option("--agent", cf.agents, "restrict to these agents");
  cf_cmd->add_option("--require", cf.require, "exit 1 unless these properties hold");

  FindModelArgs fm;
  auto* fm_cmd = app.add_subcommand("find-model", "search for a model of the given constraints");
  fm_cmd->add_option("--agents", fm.agents, "agents of a generic search")->delimiter(',');
  fm_cmd->add_option("--max-worlds", fm.max_worlds, "generic search bound")->check(CLI::Range(1, 6));
  fm_cmd->add_option("--model", fm.model, "search subsets of this model's worlds");
  fm_cmd->add_option("--point", fm.point, "point of a --model search");
  fm_cmd->add_option("--frame", fm.frames, "PROPERTY or AGENT:PROPERTY");
  fm_cmd->add_option("--valid", fm.valid, "formula true at every world");
  fm_cmd->add_option("--at-point", fm.at_point, "formula true at the point");
  fm_cmd->add_option("--somewhere", fm.somewhere, "formula true at some world");
  fm_cmd->add_option("--expect", fm.expect, "sat or unsat")->check(CLI::IsMember({"sat", "unsat"}));
  fm_cmd->add_option("--split", fm.split, "solve 2^N branches in parallel")->check(CLI::Range(0, 6));

  auto* qv_cmd = app.add_subcommand("quantum-verify", "recompute the appendix expectations and unitarity checks");

  FrRunArgs fr;
  auto* fr_cmd = app.add_subcommand("fr-run", "run a lemma or theorem of the protocol analysis");
  fr_cmd->add_option("--run", fr.run, "theorem, lemma1, lemma2 or all")
      ->check(CLI::IsMember({"theorem", "lemma1", "lemma2", "all"}));
  fr_cmd->add_option("--frame", fr.frame, "reflexive or serial");
  fr_cmd->add_option("--point", fr.point, "outcome world, e.g. w_1_1_ok_fail");

  FrAblateArgs ab;
  auto* ab_cmd = app.add_subcommand("fr-ablate", "rerun the theorem with one condition removed");
  ab_cmd->add_option("--drop", ab.drop, "none, u-a, star-necessity or star-witness")->required();
  ab_cmd->add_option("--frame", ab.frame, "reflexive or serial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitExpected;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*eval_cmd) return run_eval(g, eval, out, err);
    if (*cf_cmd) return run_check_frame(g, cf, out);
    if (*fm_cmd) return run_find_model(g, fm, out);
    if (*qv_cmd) return run_quantum_verify(g, out);
    if (*fr_cmd) return run_fr(g, fr, out);
    if (*ab_cmd) return run_fr_ablate(g, ab, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e)) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    err << "internal error: " << e.what() << "\n";
    return kExitUnexpected;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace frlogic::cli
