#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace frlogic::logic::sat {

using Var = int;

/// Literal 2v (positive) or 2v+1 (negated).
struct Lit {
  int code = 0;
  Var var() const { return code >> 1; }
  bool negated() const { return code & 1; }
  Lit operator~() const { return Lit{code ^ 1}; }
  friend bool operator==(Lit a, Lit b) { return a.code == b.code; }
  friend bool operator<(Lit a, Lit b) { return a.code < b.code; }
};

inline Lit pos(Var v) { return Lit{2 * v}; }
inline Lit neg(Var v) { return Lit{2 * v + 1}; }

using Clause = std::vector<Lit>;
using LabelId = std::uint32_t;
/// Sorted, duplicate-free.
using LabelSet = std::vector<LabelId>;

LabelSet label_union(const LabelSet& a, const LabelSet& b);

enum class Status { Sat, Unsat };

struct ConflictRecord {
  std::size_t level = 0;         ///< decision level at which the conflict arose
  std::size_t learned_size = 0;  ///< literals in the learned clause (0 at level 0)
  LabelSet violated;             ///< labels of the falsified clause
};

struct SolverStats {
  std::size_t decisions = 0;
  std::size_t propagations = 0;
  std::size_t conflicts = 0;
};

/// Conflict-driven clause learning solver: two watched literals, first-UIP
/// learning, VSIDS decisions (ties to the lowest index) with phase saving
/// starting from false, Luby restarts. Fully deterministic.
/// Every clause carries the labels of the input clauses it was derived from, so
/// an UNSAT answer yields the set of labelled constraints involved.
class Solver {
 public:
  Var new_var();
  std::size_t num_vars() const { return values_.size(); }

  LabelId intern_label(const std::string& name);
  const std::string& label_name(LabelId id) const { return label_names_[id]; }

  /// Tautologies are dropped; duplicate literals merged. Must precede solve().
  void add_clause(Clause c, LabelId label);
  /// A variable that is true in every model.
  Lit true_lit();

  Status solve();

  /// Model value after Sat.
  bool value(Var v) const { return values_[static_cast<std::size_t>(v)] == 1; }
  bool value(Lit l) const { return value(l.var()) != l.negated(); }

  /// After Unsat: labels of the input clauses the refutation used.
  const LabelSet& core() const { return core_; }
  const std::vector<ConflictRecord>& conflict_log() const { return log_; }
  /// Learned clauses in derivation order; the empty clause is implicit.
  const std::vector<Clause>& learned() const { return learned_; }
  /// Input clauses, after normalization.
  const std::vector<Clause>& original() const { return original_; }
  const SolverStats& stats() const { return stats_; }

 private:
  struct ClauseData {
    Clause lits;
    LabelSet labels;
  };

  int lit_value(Lit l) const;  // 1 true, 0 false, -1 unassigned
  void enqueue(Lit l, int reason);
  int propagate();  // conflicting clause index or -1
  void analyze(int confl, Clause& out, LabelSet& labels, std::size_t& back_level);
  LabelSet level0_labels(int confl) const;
  void backtrack(std::size_t level);
  std::size_t level() const { return trail_lim_.size(); }
  int attach(Clause c, LabelSet labels);

  bool heap_less(Var a, Var b) const;  // a is preferred over b
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  void heap_insert(Var v);
  Var heap_pop();
  void bump(Var v);

  std::vector<std::int8_t> values_;
  std::vector<std::size_t> levels_;
  std::vector<int> reasons_;
  std::vector<LabelSet> zero_labels_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<ClauseData> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> units_;  // indices of single-literal clauses
  std::vector<int> empties_;
  std::vector<char> seen_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<Var> heap_;
  std::vector<int> heap_pos_;  // -1 when not in the heap
  std::vector<std::int8_t> phase_;

  std::vector<std::string> label_names_;
  std::unordered_map<std::string, LabelId> label_ids_;
  std::vector<Clause> original_;
  std::vector<Clause> learned_;
  std::vector<ConflictRecord> log_;
  LabelSet core_;
  SolverStats stats_;
  int true_var_ = -1;
  bool solved_ = false;
};

/// Independent reverse-unit-propagation check: every learned clause, in order,
/// must follow from the input plus earlier learned clauses by unit propagation,
/// and the final clause set must propagate to a conflict.
bool verify_refutation(std::size_t num_vars, const std::vector<Clause>& original, const std::vector<Clause>& learned);

}  // namespace frlogic::logic::sat
