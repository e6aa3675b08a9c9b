#include "frlogic/logic/model_finder.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <unordered_map>

namespace frlogic::logic {

namespace {

using sat::Clause;
using sat::Lit;

class Encoder {
 public:
  Encoder(const ModelSpec& spec, std::size_t n, sat::Solver& s)
      : spec_(spec), n_(n), s_(s), fixed_(spec.candidates.has_value()), def_(s.intern_label("def")) {}

  void encode() {
    const Lit t = s_.true_lit();
    // Presence first: decisions go lowest-index first with the false phase, so
    // the search prefers small world sets.
    for (std::size_t w = 0; w < n_; ++w) presence_.push_back(fixed_ ? sat::pos(s_.new_var()) : t);
    for (const auto& agent : spec_.agents) {
      auto& rel = relations_[agent];
      rel.resize(n_ * n_);
      for (std::size_t w = 0; w < n_; ++w)
        for (std::size_t v = 0; v < n_; ++v) rel[w * n_ + v] = sat::pos(s_.new_var());
    }
    if (fixed_) encode_presence();
    encode_frames();
    encode_forbidden();
    encode_formulas();
    encode_witnesses();
  }

  Lit presence(std::size_t w) const { return presence_[w]; }
  Lit relation(const std::string& agent, std::size_t w, std::size_t v) const {
    auto it = relations_.find(agent);
    if (it == relations_.end()) throw UnknownAgent(agent);
    return it->second[w * n_ + v];
  }
  const std::vector<std::string>& free_atoms() const { return atom_order_; }
  Lit atom_lit(const std::string& name, std::size_t w) const { return atom_vars_.at(name)[w]; }
  bool fixed() const { return fixed_; }

 private:
  void add(Clause c, const std::string& label) { s_.add_clause(std::move(c), s_.intern_label(label)); }
  void def(Clause c) { s_.add_clause(std::move(c), def_); }

  void encode_presence() {
    for (const auto& agent : spec_.agents)
      for (std::size_t w = 0; w < n_; ++w)
        for (std::size_t v = 0; v < n_; ++v) {
          const Lit r = relation(agent, w, v);
          add({~r, presence_[w]}, "presence");
          add({~r, presence_[v]}, "presence");
        }
    for (std::size_t w : spec_.required) add({presence_.at(w)}, "required");
    if (!spec_.allowed.empty()) {
      const std::set<std::size_t> ok(spec_.allowed.begin(), spec_.allowed.end());
      for (std::size_t w = 0; w < n_; ++w)
        if (!ok.count(w)) add({~presence_[w]}, "allowed");
    }
    if (spec_.point) {
      add({presence_.at(*spec_.point)}, "point");
    } else {
      add(Clause(presence_.begin(), presence_.end()), "nonempty");
    }
  }

  void encode_frames() {
    for (const auto& [agent, props] : spec_.frame_properties) {
      if (!relations_.count(agent)) throw UnknownAgent(agent);
      for (FrameProperty p : props) {
        const std::string label = std::string("frame:") + to_string(p) + ":" + agent;
        for (std::size_t w = 0; w < n_; ++w) {
          switch (p) {
            case FrameProperty::Reflexive:
              add({~presence_[w], relation(agent, w, w)}, label);
              break;
            case FrameProperty::Serial: {
              Clause c{~presence_[w]};
              for (std::size_t v = 0; v < n_; ++v) c.push_back(relation(agent, w, v));
              add(c, label);
              break;
            }
            case FrameProperty::Symmetric:
              for (std::size_t v = 0; v < n_; ++v) add({~relation(agent, w, v), relation(agent, v, w)}, label);
              break;
            case FrameProperty::Transitive:
              for (std::size_t v = 0; v < n_; ++v)
                for (std::size_t u = 0; u < n_; ++u)
                  add({~relation(agent, w, v), ~relation(agent, v, u), relation(agent, w, u)}, label);
              break;
            case FrameProperty::Euclidean:
              for (std::size_t v = 0; v < n_; ++v)
                for (std::size_t u = 0; u < n_; ++u)
                  add({~relation(agent, w, v), ~relation(agent, w, u), relation(agent, v, u)}, label);
              break;
          }
        }
      }
    }
  }

  void encode_forbidden() {
    for (const auto& f : spec_.forbidden) {
      if (f.from >= n_ || f.to >= n_) throw std::out_of_range("forbidden pair refers to a missing world");
      add({~relation(f.agent, f.from, f.to)}, "forbid:" + f.label);
    }
  }

  void encode_formulas() {
    for (const auto& v : spec_.validities)
      for (std::size_t w = 0; w < n_; ++w) add({~presence_[w], lit_of(v.formula, w)}, "validity:" + v.label);
    for (const auto& p : spec_.at_point) add({lit_of(p.formula, point_index())}, "point:" + p.label);
    for (const auto& sw : spec_.somewhere) {
      Clause some;
      for (std::size_t w = 0; w < n_; ++w) {
        const Lit c = sat::pos(s_.new_var());
        def({~c, presence_[w]});
        def({~c, lit_of(sw.formula, w)});
        some.push_back(c);
      }
      add(some, "somewhere:" + sw.label);
    }
  }

  void encode_witnesses() {
    for (const auto& wr : spec_.witnesses)
      for (std::size_t w = 0; w < n_; ++w) {
        Clause c{~presence_[w], ~lit_of(wr.guard, w)};
        for (std::size_t v = 0; v < n_; ++v) {
          const Lit e = sat::pos(s_.new_var());
          def({~e, relation(wr.agent, w, v)});
          def({~e, lit_of(wr.target, v)});
          c.push_back(e);
        }
        add(c, "witness:" + wr.label);
      }
  }

  std::size_t point_index() const { return fixed_ ? spec_.point.value() : 0; }

  Lit fresh() { return sat::pos(s_.new_var()); }

  Lit atom_value(const std::string& name, std::size_t w) {
    if (fixed_) {
      const WorldSet& ext = spec_.candidates->atom(name);
      return ext(static_cast<Eigen::Index>(w)) ? s_.true_lit() : ~s_.true_lit();
    }
    auto it = atom_vars_.find(name);
    if (it == atom_vars_.end()) {
      std::vector<Lit> vars;
      for (std::size_t i = 0; i < n_; ++i) vars.push_back(fresh());
      it = atom_vars_.emplace(name, std::move(vars)).first;
      atom_order_.push_back(name);
    }
    return it->second[w];
  }

  Lit lit_of(const Formula& f, std::size_t w) {
    if (f.kind() == Kind::Atom) return atom_value(f.label(), w);
    if (f.kind() == Kind::Not) return ~lit_of(f.child(), w);
    if (f.kind() == Kind::Diamond) return ~lit_of(box(f.label(), neg(f.child())), w);

    const std::string key = to_string(f);
    auto& row = memo_[key];
    if (row.empty()) row.assign(n_, Lit{-1});
    if (row[w].code >= 0) return row[w];

    Lit v{};
    switch (f.kind()) {
      case Kind::And: {
        const Lit a = lit_of(f.lhs(), w), b = lit_of(f.rhs(), w);
        v = fresh();
        def({~v, a});
        def({~v, b});
        def({v, ~a, ~b});
        break;
      }
      case Kind::Or:
      case Kind::Implies: {
        const Lit a0 = lit_of(f.lhs(), w), b = lit_of(f.rhs(), w);
        const Lit a = f.kind() == Kind::Implies ? ~a0 : a0;
        v = fresh();
        def({~v, a, b});
        def({v, ~a});
        def({v, ~b});
        break;
      }
      case Kind::Equiv: {
        const Lit a = lit_of(f.lhs(), w), b = lit_of(f.rhs(), w);
        v = fresh();
        def({~v, ~a, b});
        def({~v, a, ~b});
        def({v, a, b});
        def({v, ~a, ~b});
        break;
      }
      case Kind::Box: {
        std::vector<Lit> inner(n_);
        for (std::size_t u = 0; u < n_; ++u) inner[u] = lit_of(f.child(), u);
        v = fresh();
        Clause some_counter{v};
        for (std::size_t u = 0; u < n_; ++u) {
          const Lit r = relation(f.label(), w, u);
          def({~v, ~r, inner[u]});
          const Lit b = fresh();
          def({~b, r});
          def({~b, ~inner[u]});
          some_counter.push_back(b);
        }
        def(some_counter);
        break;
      }
      default:
        throw std::logic_error("unreachable formula kind in encoder");
    }
    memo_[key][w] = v;
    return v;
  }

  const ModelSpec& spec_;
  std::size_t n_;
  sat::Solver& s_;
  bool fixed_;
  sat::LabelId def_;
  std::vector<Lit> presence_;
  std::map<std::string, std::vector<Lit>> relations_;
  std::unordered_map<std::string, std::vector<Lit>> memo_;
  std::map<std::string, std::vector<Lit>> atom_vars_;
  std::vector<std::string> atom_order_;
};

struct BranchOutcome {
  sat::Status status = sat::Status::Unsat;
  KripkeModel model;
  std::optional<std::size_t> point;
  std::vector<std::size_t> candidate_of_world;
  std::vector<std::string> core;
  std::vector<std::string> log;
  bool checked = false;
  std::size_t root_conflicts = 0;
  sat::SolverStats stats;
  std::size_t variables = 0;
  std::size_t clauses = 0;
};

std::string join_labels(const sat::Solver& s, const sat::LabelSet& labels) {
  std::string out;
  for (sat::LabelId id : labels) {
    if (!out.empty()) out += ",";
    out += s.label_name(id);
  }
  return out;
}

BranchOutcome solve_branch(const ModelSpec& spec, std::size_t n, unsigned split, unsigned branch) {
  sat::Solver s;
  Encoder enc(spec, n, s);
  enc.encode();
  if (split > 0) {
    // Leading relation variables of the first agent, in variable order.
    const std::string& agent = spec.agents.front();
    for (unsigned i = 0; i < split; ++i) {
      const Lit r = enc.relation(agent, i / n, i % n);
      const bool bit = (branch >> (split - 1 - i)) & 1U;
      s.add_clause({bit ? r : ~r}, s.intern_label("split"));
    }
  }

  BranchOutcome out;
  out.variables = s.num_vars();
  out.clauses = s.original().size();
  out.status = s.solve();
  out.stats = s.stats();
  const std::string prefix = "n=" + std::to_string(n) + (split ? " branch=" + std::to_string(branch) : "") + " ";

  if (out.status == sat::Status::Unsat) {
    for (sat::LabelId id : s.core()) {
      const std::string& name = s.label_name(id);
      if (name != "def" && name != "def:true" && name != "split") out.core.push_back(name);
    }
    for (std::size_t i = 0; i < s.conflict_log().size(); ++i) {
      const auto& c = s.conflict_log()[i];
      if (c.level == 0) ++out.root_conflicts;
      out.log.push_back(prefix + "conflict " + std::to_string(i) + " level " + std::to_string(c.level) + " learned " +
                        std::to_string(c.learned_size) + " violated " + join_labels(s, c.violated));
    }
    out.checked = sat::verify_refutation(s.num_vars(), s.original(), s.learned());
    return out;
  }

  std::vector<std::size_t> present;
  for (std::size_t w = 0; w < n; ++w)
    if (s.value(enc.presence(w))) present.push_back(w);
  std::vector<std::string> names;
  for (std::size_t w : present) names.push_back(enc.fixed() ? spec.candidates->frame().worlds()[w] : "w" + std::to_string(w));
  KripkeModel m{KripkeFrame(names, spec.agents)};
  for (const auto& agent : spec.agents)
    for (std::size_t i = 0; i < present.size(); ++i)
      for (std::size_t j = 0; j < present.size(); ++j)
        if (s.value(enc.relation(agent, present[i], present[j]))) m.frame().add_pair(agent, i, j);
  if (enc.fixed()) {
    for (const auto& name : spec.candidates->atom_names()) {
      WorldSet ext = empty_set(present.size());
      for (std::size_t i = 0; i < present.size(); ++i) ext(static_cast<Eigen::Index>(i)) = spec.candidates->atom(name)(static_cast<Eigen::Index>(present[i]));
      m.set_atom(name, ext);
    }
  } else {
    for (const auto& name : enc.free_atoms()) {
      WorldSet ext = empty_set(present.size());
      for (std::size_t i = 0; i < present.size(); ++i) ext(static_cast<Eigen::Index>(i)) = s.value(enc.atom_lit(name, present[i]));
      m.set_atom(name, ext);
    }
  }
  out.model = std::move(m);
  out.candidate_of_world = present;
  if (enc.fixed()) {
    if (spec.point) out.point = static_cast<std::size_t>(std::find(present.begin(), present.end(), *spec.point) - present.begin());
  } else {
    out.point = 0;
  }
  return out;
}

FindResult run_size(const ModelSpec& spec, std::size_t n) {
  const unsigned split = std::min<unsigned>(spec.parallel_split, static_cast<unsigned>(n * n));
  const unsigned branches = split ? (1U << split) : 1U;
  std::vector<BranchOutcome> outcomes(branches);
  if (branches == 1) {
    outcomes[0] = solve_branch(spec, n, 0, 0);
  } else {
    std::vector<std::future<BranchOutcome>> futures;
    for (unsigned b = 0; b < branches; ++b) futures.push_back(std::async(std::launch::async, solve_branch, std::cref(spec), n, split, b));
    for (unsigned b = 0; b < branches; ++b) outcomes[b] = futures[b].get();
  }

  FindResult r;
  r.bound = n;
  for (const auto& o : outcomes) {
    r.stats.decisions += o.stats.decisions;
    r.stats.propagations += o.stats.propagations;
    r.stats.conflicts += o.stats.conflicts;
    r.variables = std::max(r.variables, o.variables);
    r.clauses = std::max(r.clauses, o.clauses);
  }
  // Lowest branch index wins: the branches enumerate the split variables in
  // lexicographic order with false first.
  for (auto& o : outcomes)
    if (o.status == sat::Status::Sat) {
      r.status = FindResult::Status::Sat;
      r.model = std::move(o.model);
      r.point = o.point;
      r.candidate_of_world = std::move(o.candidate_of_world);
      return r;
    }
  std::set<std::string> core;
  r.refutation_checked = true;
  for (auto& o : outcomes) {
    core.insert(o.core.begin(), o.core.end());
    r.pruning_log.insert(r.pruning_log.end(), o.log.begin(), o.log.end());
    r.refutation_checked = r.refutation_checked && o.checked;
    r.conflicts_at_root += o.root_conflicts;
  }
  r.core.assign(core.begin(), core.end());
  return r;
}

}  // namespace

std::optional<std::string> audit_model(const ModelSpec& spec, const KripkeModel& m, std::optional<std::size_t> point,
                                       const std::vector<std::size_t>& candidate_of_world) {
  auto world_of = [&](std::size_t candidate) -> std::optional<std::size_t> {
    auto it = std::find(candidate_of_world.begin(), candidate_of_world.end(), candidate);
    if (it == candidate_of_world.end()) return std::nullopt;
    return static_cast<std::size_t>(it - candidate_of_world.begin());
  };
  if (m.size() == 0) return "nonempty";
  for (const auto& [agent, props] : spec.frame_properties)
    for (FrameProperty p : props)
      if (!check_frame_property(m.frame(), p, agent).holds) return std::string("frame:") + to_string(p) + ":" + agent;
  for (const auto& v : spec.validities)
    if (!valid_in_model(m, v.formula)) return "validity:" + v.label;
  for (const auto& v : spec.at_point) {
    if (!point) return "point:" + v.label;
    if (!satisfies(m, *point, v.formula)) return "point:" + v.label;
  }
  for (const auto& v : spec.somewhere)
    if (!extension(m, v.formula).any()) return "somewhere:" + v.label;
  for (const auto& f : spec.forbidden) {
    const auto a = world_of(f.from), b = world_of(f.to);
    if (a && b && m.frame().relation(f.agent)(static_cast<Eigen::Index>(*a), static_cast<Eigen::Index>(*b)))
      return "forbid:" + f.label;
  }
  for (const auto& wr : spec.witnesses) {
    const WorldSet guard = extension(m, wr.guard);
    const WorldSet target = extension(m, wr.target);
    const Relation& r = m.frame().relation(wr.agent);
    for (Eigen::Index w = 0; w < guard.size(); ++w)
      if (guard(w) && !(r.row(w).transpose() && target).any()) return "witness:" + wr.label;
  }
  if (spec.candidates) {
    for (std::size_t c : spec.required)
      if (!world_of(c)) return "required";
    if (!spec.allowed.empty())
      for (std::size_t c : candidate_of_world)
        if (std::find(spec.allowed.begin(), spec.allowed.end(), c) == spec.allowed.end()) return "allowed";
    if (spec.point && !world_of(*spec.point)) return "point";
  }
  return std::nullopt;
}

FindResult find_model(const ModelSpec& spec) {
  for (const auto& [agent, props] : spec.frame_properties)
    if (std::find(spec.agents.begin(), spec.agents.end(), agent) == spec.agents.end()) throw UnknownAgent(agent);

  auto finish = [&](FindResult r) {
    if (r.sat()) {
      if (auto bad = audit_model(spec, *r.model, r.point, r.candidate_of_world))
        throw AuditFailure("model finder produced a model violating '" + *bad + "'");
    }
    return r;
  };

  if (spec.candidates) {
    const std::size_t n = spec.candidates->size();
    if (n == 0) throw std::invalid_argument("empty candidate world set");
    if (spec.point && *spec.point >= n) throw std::out_of_range("point is not a candidate world");
    return finish(run_size(spec, n));
  }

  if (spec.world_count_max == 0 || spec.world_count_max > kGenericWorldBound)
    throw BoundExceeded("world_count_max must be between 1 and " + std::to_string(kGenericWorldBound) + ", got " +
                        std::to_string(spec.world_count_max));
  FindResult total;
  std::set<std::string> core;
  total.refutation_checked = true;
  for (std::size_t n = 1; n <= spec.world_count_max; ++n) {
    FindResult r = run_size(spec, n);
    if (r.sat()) return finish(std::move(r));
    core.insert(r.core.begin(), r.core.end());
    total.pruning_log.insert(total.pruning_log.end(), r.pruning_log.begin(), r.pruning_log.end());
    total.refutation_checked = total.refutation_checked && r.refutation_checked;
    total.conflicts_at_root += r.conflicts_at_root;
    total.stats.decisions += r.stats.decisions;
    total.stats.propagations += r.stats.propagations;
    total.stats.conflicts += r.stats.conflicts;
    total.variables = std::max(total.variables, r.variables);
    total.clauses = std::max(total.clauses, r.clauses);
  }
  total.bound = spec.world_count_max;
  total.core.assign(core.begin(), core.end());
  return total;
}

}  // namespace frlogic::logic
