#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/kripke.hpp"
#include "frlogic/logic/sat.hpp"

namespace frlogic::logic {

/// Hard cap on the generic (free valuation) search.
inline constexpr std::size_t kGenericWorldBound = 6;

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a decoded model fails re-verification; indicates an encoder bug.
class AuditFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LabeledFormula {
  std::string label;
  Formula formula;
};

/// w R_agent v is excluded.
struct ForbiddenPair {
  std::string label;
  std::string agent;
  std::size_t from = 0;
  std::size_t to = 0;
};

/// At every present world satisfying `guard`, some agent-accessible world satisfies `target`.
struct WitnessRequirement {
  std::string label;
  std::string agent;
  Formula guard;
  Formula target;
};

struct ModelSpec {
  std::vector<std::string> agents;
  std::map<std::string, std::vector<FrameProperty>> frame_properties;
  std::vector<LabeledFormula> validities;  ///< true at every world
  std::vector<LabeledFormula> at_point;    ///< true at the point
  std::vector<LabeledFormula> somewhere;   ///< true at some world
  std::vector<ForbiddenPair> forbidden;    ///< world indices refer to the candidates
  std::vector<WitnessRequirement> witnesses;

  /// Generic mode: worlds w0..w(n-1), n = 1..world_count_max, free valuation,
  /// point w0. Ignored when `candidates` is set.
  std::size_t world_count_max = 0;

  /// Fixed mode: W is any subset of these worlds, valuation taken from the model.
  std::optional<KripkeModel> candidates;
  std::optional<std::size_t> point;        ///< fixed mode: candidate index
  std::vector<std::size_t> required;       ///< fixed mode: candidates that must be present
  std::vector<std::size_t> allowed;        ///< fixed mode: if non-empty, only these may be present

  /// Split the search on this many leading relation variables and solve the
  /// branches on separate threads. 0 disables.
  unsigned parallel_split = 0;
};

struct FindResult {
  enum class Status { Sat, Unsat } status = Status::Unsat;

  // Sat
  std::optional<KripkeModel> model;
  std::optional<std::size_t> point;             ///< index in `model`
  std::vector<std::size_t> candidate_of_world;  ///< fixed mode: model world -> candidate index

  // Unsat certificate
  std::size_t bound = 0;                   ///< largest world count searched
  std::vector<std::string> core;           ///< constraint labels used by the refutation
  std::vector<std::string> pruning_log;    ///< one line per conflict
  bool refutation_checked = false;         ///< learned clauses pass the RUP check
  std::size_t conflicts_at_root = 0;

  sat::SolverStats stats;
  std::size_t variables = 0;
  std::size_t clauses = 0;

  bool sat() const { return status == Status::Sat; }
};

/// Throws BoundExceeded if generic mode asks for more than kGenericWorldBound worlds
/// (or zero). SAT models are audited with satisfies/check_frame_property before return.
FindResult find_model(const ModelSpec& spec);

/// Audits a model against a ModelSpec. Returns the first violated constraint label,
/// or nullopt. `candidate_of_world` maps model worlds to candidate indices (fixed mode).
std::optional<std::string> audit_model(const ModelSpec& spec, const KripkeModel& m, std::optional<std::size_t> point,
                                       const std::vector<std::size_t>& candidate_of_world);

}  // namespace frlogic::logic
