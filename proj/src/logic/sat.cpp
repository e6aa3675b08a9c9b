#include "frlogic/logic/sat.hpp"

#include <algorithm>
#include <stdexcept>

namespace frlogic::logic::sat {

LabelSet label_union(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Var Solver::new_var() {
  const Var v = static_cast<Var>(values_.size());
  values_.push_back(-1);
  levels_.push_back(0);
  reasons_.push_back(-1);
  zero_labels_.emplace_back();
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  phase_.push_back(0);
  heap_insert(v);
  return v;
}

bool Solver::heap_less(Var a, Var b) const {
  const double x = activity_[static_cast<std::size_t>(a)], y = activity_[static_cast<std::size_t>(b)];
  return x > y || (x == y && a < b);
}

void Solver::heap_up(std::size_t i) {
  const Var v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  const Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_insert(Var v) {
  if (heap_pos_[static_cast<std::size_t>(v)] >= 0) return;
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

Var Solver::heap_pop() {
  const Var top = heap_.front();
  heap_pos_[static_cast<std::size_t>(top)] = -1;
  heap_.front() = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[static_cast<std::size_t>(heap_.front())] = 0;
    heap_down(0);
  }
  return top;
}

void Solver::bump(Var v) {
  const auto i = static_cast<std::size_t>(v);
  activity_[i] += var_inc_;
  if (activity_[i] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[i] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[i]));
}

LabelId Solver::intern_label(const std::string& name) {
  auto it = label_ids_.find(name);
  if (it != label_ids_.end()) return it->second;
  const auto id = static_cast<LabelId>(label_names_.size());
  label_names_.push_back(name);
  label_ids_.emplace(name, id);
  return id;
}

Lit Solver::true_lit() {
  if (true_var_ < 0) {
    true_var_ = new_var();
    add_clause({pos(true_var_)}, intern_label("def:true"));
  }
  return pos(true_var_);
}

int Solver::attach(Clause c, LabelSet labels) {
  const int idx = static_cast<int>(clauses_.size());
  if (c.size() >= 2) {
    watches_[static_cast<std::size_t>(c[0].code)].push_back(idx);
    watches_[static_cast<std::size_t>(c[1].code)].push_back(idx);
  }
  clauses_.push_back({std::move(c), std::move(labels)});
  return idx;
}

void Solver::add_clause(Clause c, LabelId label) {
  if (solved_) throw std::logic_error("add_clause after solve");
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i].var() == c[i + 1].var()) return;  // tautology
  for (Lit l : c)
    if (static_cast<std::size_t>(l.var()) >= num_vars()) throw std::out_of_range("clause uses an undeclared variable");
  original_.push_back(c);
  const std::size_t n = c.size();
  const int idx = attach(std::move(c), LabelSet{label});
  if (n == 0) empties_.push_back(idx);
  if (n == 1) units_.push_back(idx);
}

int Solver::lit_value(Lit l) const {
  const std::int8_t v = values_[static_cast<std::size_t>(l.var())];
  if (v < 0) return -1;
  return (v == 1) != l.negated() ? 1 : 0;
}

void Solver::enqueue(Lit l, int reason) {
  const auto v = static_cast<std::size_t>(l.var());
  values_[v] = l.negated() ? 0 : 1;
  levels_[v] = level();
  reasons_[v] = reason;
  if (level() == 0 && reason >= 0) {
    LabelSet labels = clauses_[static_cast<std::size_t>(reason)].labels;
    for (Lit q : clauses_[static_cast<std::size_t>(reason)].lits)
      if (q.var() != l.var()) labels = label_union(labels, zero_labels_[static_cast<std::size_t>(q.var())]);
    zero_labels_[v] = std::move(labels);
  }
  trail_.push_back(l);
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    auto& ws = watches_[static_cast<std::size_t>(false_lit.code)];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const int ci = ws[i];
      Clause& c = clauses_[static_cast<std::size_t>(ci)].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (lit_value(c[0]) == 1) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k)
        if (lit_value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[static_cast<std::size_t>(c[1].code)].push_back(ci);
          moved = true;
          break;
        }
      if (moved) continue;
      ws[keep++] = ci;
      if (lit_value(c[0]) == 0) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
        ws.resize(keep);
        qhead_ = trail_.size();
        return ci;
      }
      ++stats_.propagations;
      enqueue(c[0], ci);
    }
    ws.resize(keep);
  }
  return -1;
}

void Solver::analyze(int confl, Clause& out, LabelSet& labels, std::size_t& back_level) {
  out.clear();
  out.push_back(Lit{});  // slot for the asserting literal
  labels.clear();
  int pending = 0;
  Lit p{-1};
  std::size_t index = trail_.size();
  std::vector<Var> touched;
  do {
    const ClauseData& c = clauses_[static_cast<std::size_t>(confl)];
    labels = label_union(labels, c.labels);
    for (Lit q : c.lits) {
      if (p.code >= 0 && q == p) continue;
      const auto v = static_cast<std::size_t>(q.var());
      if (seen_[v]) continue;
      if (levels_[v] == 0) {
        labels = label_union(labels, zero_labels_[v]);
        continue;
      }
      seen_[v] = 1;
      touched.push_back(q.var());
      bump(q.var());
      if (levels_[v] == level())
        ++pending;
      else
        out.push_back(q);
    }
    do {
      p = trail_[--index];
    } while (!seen_[static_cast<std::size_t>(p.var())]);
    confl = reasons_[static_cast<std::size_t>(p.var())];
    seen_[static_cast<std::size_t>(p.var())] = 0;
    --pending;
  } while (pending > 0);
  out[0] = ~p;
  for (Var v : touched) seen_[static_cast<std::size_t>(v)] = 0;

  back_level = 0;
  if (out.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < out.size(); ++i)
      if (levels_[static_cast<std::size_t>(out[i].var())] > levels_[static_cast<std::size_t>(out[best].var())]) best = i;
    std::swap(out[1], out[best]);
    back_level = levels_[static_cast<std::size_t>(out[1].var())];
  }
}

LabelSet Solver::level0_labels(int confl) const {
  LabelSet labels = clauses_[static_cast<std::size_t>(confl)].labels;
  for (Lit q : clauses_[static_cast<std::size_t>(confl)].lits)
    labels = label_union(labels, zero_labels_[static_cast<std::size_t>(q.var())]);
  return labels;
}

void Solver::backtrack(std::size_t lvl) {
  if (level() <= lvl) return;
  const std::size_t stop = trail_lim_[lvl];
  for (std::size_t i = trail_.size(); i-- > stop;) {
    const auto v = static_cast<std::size_t>(trail_[i].var());
    phase_[v] = values_[v];
    values_[v] = -1;
    reasons_[v] = -1;
    heap_insert(static_cast<Var>(v));
  }
  trail_.resize(stop);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

Status Solver::solve() {
  if (solved_) throw std::logic_error("solve() called twice");
  solved_ = true;

  auto finish_unsat = [&](LabelSet labels) {
    core_ = std::move(labels);
    return Status::Unsat;
  };

  if (!empties_.empty()) return finish_unsat(clauses_[static_cast<std::size_t>(empties_.front())].labels);
  for (int ci : units_) {
    const Lit l = clauses_[static_cast<std::size_t>(ci)].lits[0];
    const int val = lit_value(l);
    if (val == 0) {
      const auto v = static_cast<std::size_t>(l.var());
      ++stats_.conflicts;
      log_.push_back({0, 0, clauses_[static_cast<std::size_t>(ci)].labels});
      return finish_unsat(label_union(clauses_[static_cast<std::size_t>(ci)].labels, zero_labels_[v]));
    }
    if (val < 0) enqueue(l, ci);
  }

  // Luby sequence 1 1 2 1 1 2 4 ..., in units of 100 conflicts.
  auto luby = [](std::size_t i) {
    std::size_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::size_t{1} << seq;
  };
  std::size_t restarts = 0;
  std::size_t budget = 100 * luby(0);

  Clause learned;
  LabelSet labels;
  for (;;) {
    const int confl = propagate();
    if (confl >= 0) {
      ++stats_.conflicts;
      if (level() == 0) {
        log_.push_back({0, 0, clauses_[static_cast<std::size_t>(confl)].labels});
        return finish_unsat(level0_labels(confl));
      }
      log_.push_back({level(), 0, clauses_[static_cast<std::size_t>(confl)].labels});
      std::size_t back = 0;
      analyze(confl, learned, labels, back);
      log_.back().learned_size = learned.size();
      learned_.push_back(learned);
      backtrack(back);
      const int ci = attach(learned, labels);
      enqueue(learned[0], ci);
      var_inc_ /= 0.95;
      if (--budget == 0) {
        budget = 100 * luby(++restarts);
        backtrack(0);
      }
      continue;
    }
    Var next = -1;
    while (!heap_.empty()) {
      const Var v = heap_pop();
      if (values_[static_cast<std::size_t>(v)] < 0) {
        next = v;
        break;
      }
    }
    if (next < 0) return Status::Sat;
    ++stats_.decisions;
    trail_lim_.push_back(trail_.size());
    enqueue(phase_[static_cast<std::size_t>(next)] == 1 ? pos(next) : neg(next), -1);
  }
}

// --- RUP checker --------------------------------------------------------------

namespace {

class RupChecker {
 public:
  explicit RupChecker(std::size_t num_vars) : values_(num_vars, -1), occurs_(2 * num_vars) {}

  void add(const Clause& c) {
    const int idx = static_cast<int>(clauses_.size());
    clauses_.push_back(c);
    if (c.size() == 1) units_.push_back(c[0]);
    if (c.empty()) has_empty_ = true;
    for (Lit l : c) occurs_[static_cast<std::size_t>(l.code)].push_back(idx);
  }

  /// Assumes the negation of `c` and propagates; true iff a conflict follows.
  bool implied(const Clause& c) {
    std::vector<Lit> queue;
    std::vector<Var> assigned;
    bool conflict = false;
    auto assign = [&](Lit l) {
      const int val = value(l);
      if (val == 0) {
        conflict = true;
        return;
      }
      if (val == 1) return;
      values_[static_cast<std::size_t>(l.var())] = l.negated() ? 0 : 1;
      assigned.push_back(l.var());
      queue.push_back(l);
    };
    for (Lit l : c) assign(~l);
    // Unit clauses seed propagation.
    if (has_empty_) conflict = true;
    for (std::size_t i = 0; i < units_.size() && !conflict; ++i) assign(units_[i]);
    std::size_t head = 0;
    while (!conflict && head < queue.size()) {
      const Lit p = queue[head++];
      for (int ci : occurs_[static_cast<std::size_t>((~p).code)]) {
        const Clause& cl = clauses_[static_cast<std::size_t>(ci)];
        int unassigned = 0;
        Lit last{};
        bool sat = false;
        for (Lit q : cl) {
          const int val = value(q);
          if (val == 1) {
            sat = true;
            break;
          }
          if (val < 0) {
            ++unassigned;
            last = q;
          }
        }
        if (sat) continue;
        if (unassigned == 0) {
          conflict = true;
          break;
        }
        if (unassigned == 1) assign(last);
        if (conflict) break;
      }
    }
    for (Var v : assigned) values_[static_cast<std::size_t>(v)] = -1;
    return conflict;
  }

 private:
  int value(Lit l) const {
    const std::int8_t v = values_[static_cast<std::size_t>(l.var())];
    if (v < 0) return -1;
    return (v == 1) != l.negated() ? 1 : 0;
  }

  std::vector<std::int8_t> values_;
  std::vector<std::vector<int>> occurs_;
  std::vector<Clause> clauses_;
  std::vector<Lit> units_;
  bool has_empty_ = false;
};

}  // namespace

bool verify_refutation(std::size_t num_vars, const std::vector<Clause>& original, const std::vector<Clause>& learned) {
  RupChecker checker(num_vars);
  for (const Clause& c : original) checker.add(c);
  for (const Clause& c : learned) {
    if (!checker.implied(c)) return false;
    checker.add(c);
  }
  return checker.implied(Clause{});
}

}  // namespace frlogic::logic::sat
