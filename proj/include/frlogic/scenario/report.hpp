#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frlogic/logic/kripke.hpp"
#include "frlogic/logic/model_finder.hpp"
#include "frlogic/scenario/bridge.hpp"
#include "frlogic/scenario/derivation.hpp"

namespace frlogic::scenario {

enum class Verdict { Sat, Unsat, Contradiction };

const char* to_string(Verdict v);

struct ReportCheck {
  std::string id;
  bool passed = false;
  std::string detail;
};

struct SearchSummary {
  std::string id;
  std::string description;
  bool sat = false;
  std::size_t bound = 0;
  std::size_t variables = 0;
  std::size_t clauses = 0;
  std::size_t decisions = 0;
  std::size_t conflicts = 0;
  bool refutation_checked = false;
  std::vector<std::string> core;
  std::size_t forbidden_pairs = 0;
  std::size_t witnesses = 0;
};

SearchSummary summarize(std::string id, std::string description, const logic::ModelSpec& spec,
                        const logic::FindResult& r);

struct RuleSummary {
  std::string id;
  std::string agent;
  std::string indicator;
  std::string target;
  std::string source;
  std::vector<std::string> unitaries;
  RuleMode mode = RuleMode::Necessity;
  double expectation = 0.0;
  double recomputed = 0.0;
};

/// Rule table with every expectation recomputed now.
std::vector<RuleSummary> summarize(const std::vector<BridgeRule>& rules, double tol);

struct ScenarioReport {
  std::string run;
  std::string frame;
  std::string claim;
  Verdict verdict = Verdict::Unsat;
  Verdict expected = Verdict::Unsat;
  std::optional<logic::KripkeModel> model;
  std::optional<std::size_t> point;  ///< index in `model`
  std::vector<TraceStep> trace;
  std::vector<ReportCheck> checks;
  std::vector<RuleSummary> rules;
  std::vector<SearchSummary> searches;
  std::vector<std::string> notes;

  bool checks_pass() const;
  /// Verdict matches the expectation and every check passed.
  bool as_expected() const { return verdict == expected && checks_pass(); }
};

/// Numbered steps with their premises, then checks, rules and searches.
std::string render_text(const ScenarioReport& r);

/// The model file fields (when a model is present) followed by run, verdict,
/// trace, checks, rules, searches and notes.
nlohmann::ordered_json to_json(const ScenarioReport& r);
/// Two-space indented document with a trailing newline.
std::string render_machine(const ScenarioReport& r);

}  // namespace frlogic::scenario
