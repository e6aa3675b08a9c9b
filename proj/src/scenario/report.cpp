#include "frlogic/scenario/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "frlogic/logic/model_io.hpp"

namespace frlogic::scenario {

using nlohmann::ordered_json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Sat:
      return "SAT";
    case Verdict::Unsat:
      return "UNSAT";
    case Verdict::Contradiction:
      return "CONTRADICTION";
  }
  return "?";
}

SearchSummary summarize(std::string id, std::string description, const logic::ModelSpec& spec,
                        const logic::FindResult& r) {
  SearchSummary s;
  s.id = std::move(id);
  s.description = std::move(description);
  s.sat = r.sat();
  s.bound = r.sat() ? r.model->size() : r.bound;
  s.variables = r.variables;
  s.clauses = r.clauses;
  s.decisions = r.stats.decisions;
  s.conflicts = r.stats.conflicts;
  s.refutation_checked = r.refutation_checked;
  s.core = r.core;
  s.forbidden_pairs = spec.forbidden.size();
  s.witnesses = spec.witnesses.size();
  return s;
}

std::vector<RuleSummary> summarize(const std::vector<BridgeRule>& rules, double tol) {
  std::vector<RuleSummary> out;
  for (const auto& r : rules)
    out.push_back({r.id, r.agent, r.indicator, logic::to_string(r.target), r.source, r.unitaries, r.mode,
                   r.expectation, compute_expectation(r, tol)});
  return out;
}

bool ScenarioReport::checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.passed; });
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

std::string joined(const std::vector<std::string>& xs, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

}  // namespace

std::string render_text(const ScenarioReport& r) {
  std::ostringstream out;
  out << "run: " << r.run << "\n";
  if (!r.frame.empty()) out << "frame: " << r.frame << "\n";
  out << "claim: " << r.claim << "\n";
  out << "verdict: " << to_string(r.verdict) << " (expected " << to_string(r.expected) << ")\n";

  if (!r.trace.empty()) {
    out << "\ntrace:\n";
    std::size_t n = 0;
    for (const auto& s : r.trace) {
      out << "  " << ++n << ". [" << s.id << "] " << to_string(s.scope) << ": " << logic::to_string(s.claim) << "\n";
      out << "     by " << (s.premises.empty() ? "(valuation)" : joined(s.premises)) << "; " << s.justification << "\n";
      out << "     " << (s.verified ? "verified" : "NOT verified");
      if (!s.premises_consistent && s.missing.empty()) out << ", premises jointly inconsistent";
      if (s.flagged) out << ", flagged";
      if (!s.missing.empty()) out << ", missing " << joined(s.missing);
      if (!s.milestone.empty()) out << ", completes step " << s.milestone;
      out << "\n";
    }
  }

  if (!r.checks.empty()) {
    out << "\nchecks:\n";
    for (const auto& c : r.checks) out << "  " << (c.passed ? "ok   " : "FAIL ") << c.id << ": " << c.detail << "\n";
  }

  if (!r.rules.empty()) {
    out << "\nrules:\n";
    for (const auto& rule : r.rules) {
      out << "  " << rule.id << " (" << rule.agent << ", " << to_string(rule.mode) << "): " << rule.indicator
          << " => " << rule.target << "\n";
      out << "     expectation " << fixed(rule.expectation) << ", recomputed " << fixed(rule.recomputed) << ", "
          << rule.source;
      if (!rule.unitaries.empty()) out << ", uses " << joined(rule.unitaries);
      out << "\n";
    }
  }

  if (!r.searches.empty()) {
    out << "\nsearches:\n";
    for (const auto& s : r.searches) {
      out << "  " << s.id << ": " << (s.sat ? "SAT" : "UNSAT") << ", " << s.description << "\n";
      out << "     " << s.variables << " variables, " << s.clauses << " clauses, " << s.conflicts << " conflicts, "
          << s.forbidden_pairs << " forbidden pairs, " << s.witnesses << " witness requirements\n";
      if (!s.sat) {
        out << "     refutation " << (s.refutation_checked ? "checked" : "NOT checked") << ", core: " << joined(s.core)
            << "\n";
      }
    }
  }

  if (r.model) {
    out << "\nmodel";
    if (r.point) out << " (point " << r.model->frame().worlds()[*r.point] << ")";
    out << ":\n";
    const auto& f = r.model->frame();
    out << "  worlds: " << joined(f.worlds()) << "\n";
    for (const auto& a : f.agents()) {
      std::vector<std::string> pairs;
      const auto& rel = f.relation(a);
      for (Eigen::Index w = 0; w < rel.rows(); ++w)
        for (Eigen::Index v = 0; v < rel.cols(); ++v)
          if (rel(w, v))
            pairs.push_back("(" + f.worlds()[static_cast<std::size_t>(w)] + "," +
                            f.worlds()[static_cast<std::size_t>(v)] + ")");
      out << "  R_" << a << ": " << (pairs.empty() ? "{}" : joined(pairs, " ")) << "\n";
    }
  }

  if (!r.notes.empty()) {
    out << "\nnotes:\n";
    for (const auto& n : r.notes) out << "  - " << n << "\n";
  }
  return out.str();
}

ordered_json to_json(const ScenarioReport& r) {
  ordered_json out = r.model ? logic::model_to_json(*r.model, r.point) : ordered_json::object();
  out["run"] = r.run;
  out["frame"] = r.frame;
  out["claim"] = r.claim;
  out["verdict"] = to_string(r.verdict);
  out["expected"] = to_string(r.expected);

  ordered_json trace = ordered_json::array();
  for (const auto& s : r.trace) {
    ordered_json j;
    j["id"] = s.id;
    j["scope"] = to_string(s.scope);
    j["formula"] = logic::to_string(s.claim);
    j["premises"] = s.premises;
    j["justification"] = s.justification;
    j["milestone"] = s.milestone;
    j["verified"] = s.verified;
    j["premises_consistent"] = s.premises_consistent;
    j["flagged"] = s.flagged;
    j["missing"] = s.missing;
    j["core"] = s.core;
    trace.push_back(std::move(j));
  }
  out["trace"] = std::move(trace);

  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) checks.push_back({{"id", c.id}, {"passed", c.passed}, {"detail", c.detail}});
  out["checks"] = std::move(checks);

  ordered_json rules = ordered_json::array();
  for (const auto& rule : r.rules)
    rules.push_back({{"id", rule.id},
                     {"agent", rule.agent},
                     {"indicator", rule.indicator},
                     {"target", rule.target},
                     {"source", rule.source},
                     {"unitaries", rule.unitaries},
                     {"mode", to_string(rule.mode)},
                     {"expectation", rule.expectation},
                     {"recomputed", rule.recomputed}});
  out["rules"] = std::move(rules);

  ordered_json searches = ordered_json::array();
  for (const auto& s : r.searches)
    searches.push_back({{"id", s.id},
                        {"description", s.description},
                        {"sat", s.sat},
                        {"worlds", s.bound},
                        {"variables", s.variables},
                        {"clauses", s.clauses},
                        {"decisions", s.decisions},
                        {"conflicts", s.conflicts},
                        {"refutation_checked", s.refutation_checked},
                        {"core", s.core},
                        {"forbidden_pairs", s.forbidden_pairs},
                        {"witnesses", s.witnesses}});
  out["searches"] = std::move(searches);
  out["notes"] = r.notes;
  return out;
}

std::string render_machine(const ScenarioReport& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace frlogic::scenario
