#include "frlogic/logic/kripke.hpp"

#include <algorithm>
#include <set>

namespace frlogic::logic {

namespace {

template <typename T>
void require_unique(const std::vector<T>& items, const char* what) {
  std::set<T> seen;
  for (const auto& x : items)
    if (!seen.insert(x).second) throw std::invalid_argument(std::string("duplicate ") + what + " '" + x + "'");
}

}  // namespace

KripkeFrame::KripkeFrame(std::vector<std::string> worlds, std::vector<std::string> agents)
    : worlds_(std::move(worlds)), agents_(std::move(agents)) {
  require_unique(worlds_, "world");
  require_unique(agents_, "agent");
  const auto n = static_cast<Eigen::Index>(worlds_.size());
  relations_.assign(agents_.size(), Relation::Constant(n, n, false));
}

std::optional<std::size_t> KripkeFrame::find_world(const std::string& name) const {
  auto it = std::find(worlds_.begin(), worlds_.end(), name);
  if (it == worlds_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - worlds_.begin());
}

std::size_t KripkeFrame::world_index(const std::string& name) const {
  auto w = find_world(name);
  if (!w) throw UnknownWorld(name);
  return *w;
}

bool KripkeFrame::has_agent(const std::string& id) const {
  return std::find(agents_.begin(), agents_.end(), id) != agents_.end();
}

const Relation& KripkeFrame::relation(const std::string& agent) const {
  auto it = std::find(agents_.begin(), agents_.end(), agent);
  if (it == agents_.end()) throw UnknownAgent(agent);
  return relations_[static_cast<std::size_t>(it - agents_.begin())];
}

Relation& KripkeFrame::relation(const std::string& agent) {
  return const_cast<Relation&>(static_cast<const KripkeFrame*>(this)->relation(agent));
}

void KripkeFrame::set_relation(const std::string& agent, Relation r) {
  const auto n = static_cast<Eigen::Index>(size());
  if (r.rows() != n || r.cols() != n) throw std::invalid_argument("relation for '" + agent + "' has the wrong shape");
  relation(agent) = std::move(r);
}

void KripkeFrame::add_pair(const std::string& agent, std::size_t from, std::size_t to) {
  if (from >= size() || to >= size()) throw std::out_of_range("world index out of range");
  relation(agent)(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) = true;
}

bool operator==(const KripkeFrame& a, const KripkeFrame& b) {
  if (a.worlds_ != b.worlds_ || a.agents_ != b.agents_) return false;
  for (std::size_t i = 0; i < a.relations_.size(); ++i)
    if ((a.relations_[i] != b.relations_[i]).any()) return false;
  return true;
}

void KripkeModel::set_atom(const std::string& name, WorldSet worlds) {
  if (worlds.size() != static_cast<Eigen::Index>(size())) throw std::invalid_argument("valuation of '" + name + "' has the wrong size");
  if (!valuation_.count(name)) atom_order_.push_back(name);
  valuation_[name] = std::move(worlds);
}

void KripkeModel::set_atom_at(const std::string& name, std::size_t world, bool value) {
  if (!has_atom(name)) set_atom(name, empty_set(size()));
  valuation_[name](static_cast<Eigen::Index>(world)) = value;
}

bool KripkeModel::has_atom(const std::string& name) const { return valuation_.count(name) != 0; }

const WorldSet& KripkeModel::atom(const std::string& name) const {
  auto it = valuation_.find(name);
  if (it == valuation_.end()) throw UnknownAtom(name);
  return it->second;
}

bool operator==(const KripkeModel& a, const KripkeModel& b) {
  if (!(a.frame_ == b.frame_) || a.atom_order_ != b.atom_order_) return false;
  for (const auto& name : a.atom_order_)
    if ((a.valuation_.at(name) != b.valuation_.at(name)).any()) return false;
  return true;
}

WorldSet empty_set(std::size_t n) { return WorldSet::Constant(static_cast<Eigen::Index>(n), false); }
WorldSet full_set(std::size_t n) { return WorldSet::Constant(static_cast<Eigen::Index>(n), true); }

// --- evaluation ----------------------------------------------------------------

namespace {

WorldSet box_of(const Relation& r, const WorldSet& inner) {
  WorldSet out(r.rows());
  for (Eigen::Index w = 0; w < r.rows(); ++w) out(w) = !(r.row(w).transpose() && !inner).any();
  return out;
}

}  // namespace

WorldSet extension(const KripkeModel& m, const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom:
      return m.atom(f.label());
    case Kind::Not:
      return !extension(m, f.child());
    case Kind::And:
      return extension(m, f.lhs()) && extension(m, f.rhs());
    case Kind::Or:
      return extension(m, f.lhs()) || extension(m, f.rhs());
    case Kind::Implies:
      return !extension(m, f.lhs()) || extension(m, f.rhs());
    case Kind::Equiv:
      return extension(m, f.lhs()) == extension(m, f.rhs());
    case Kind::Box:
      return box_of(m.frame().relation(f.label()), extension(m, f.child()));
    case Kind::Diamond:
      return !box_of(m.frame().relation(f.label()), !extension(m, f.child()));
  }
  throw std::logic_error("unhandled formula kind");
}

bool satisfies(const KripkeModel& m, std::size_t world, const Formula& f) {
  if (world >= m.size()) throw std::out_of_range("world index out of range");
  return extension(m, f)(static_cast<Eigen::Index>(world));
}

bool valid_in_model(const KripkeModel& m, const Formula& f) { return extension(m, f).all(); }

// --- frame properties ------------------------------------------------------------

const char* to_string(FrameProperty p) {
  switch (p) {
    case FrameProperty::Reflexive:
      return "reflexive";
    case FrameProperty::Serial:
      return "serial";
    case FrameProperty::Transitive:
      return "transitive";
    case FrameProperty::Symmetric:
      return "symmetric";
    case FrameProperty::Euclidean:
      return "euclidean";
  }
  return "?";
}

std::optional<FrameProperty> frame_property_from_string(const std::string& s) {
  for (FrameProperty p : all_frame_properties())
    if (s == to_string(p)) return p;
  return std::nullopt;
}

const std::vector<FrameProperty>& all_frame_properties() {
  static const std::vector<FrameProperty> all{FrameProperty::Reflexive, FrameProperty::Serial, FrameProperty::Transitive,
                                              FrameProperty::Symmetric, FrameProperty::Euclidean};
  return all;
}

FrameCheck check_relation(const Relation& r, FrameProperty p) {
  const Eigen::Index n = r.rows();
  auto fail = [](std::vector<std::size_t> w) { return FrameCheck{false, "", std::move(w)}; };
  auto u = [](Eigen::Index i) { return static_cast<std::size_t>(i); };
  switch (p) {
    case FrameProperty::Reflexive:
      for (Eigen::Index w = 0; w < n; ++w)
        if (!r(w, w)) return fail({u(w)});
      break;
    case FrameProperty::Serial:
      for (Eigen::Index w = 0; w < n; ++w)
        if (!r.row(w).any()) return fail({u(w)});
      break;
    case FrameProperty::Symmetric:
      for (Eigen::Index w = 0; w < n; ++w)
        for (Eigen::Index v = 0; v < n; ++v)
          if (r(w, v) && !r(v, w)) return fail({u(w), u(v)});
      break;
    case FrameProperty::Transitive:
      for (Eigen::Index w = 0; w < n; ++w)
        for (Eigen::Index v = 0; v < n; ++v)
          if (r(w, v))
            for (Eigen::Index x = 0; x < n; ++x)
              if (r(v, x) && !r(w, x)) return fail({u(w), u(v), u(x)});
      break;
    case FrameProperty::Euclidean:
      for (Eigen::Index w = 0; w < n; ++w)
        for (Eigen::Index v = 0; v < n; ++v)
          if (r(w, v))
            for (Eigen::Index x = 0; x < n; ++x)
              if (r(w, x) && !r(v, x)) return fail({u(w), u(v), u(x)});
      break;
  }
  return FrameCheck{};
}

FrameCheck check_frame_property(const KripkeFrame& f, FrameProperty p, const std::string& agent) {
  FrameCheck c = check_relation(f.relation(agent), p);
  if (!c.holds) c.agent = agent;
  return c;
}

FrameCheck check_frame_property(const KripkeFrame& f, FrameProperty p) {
  for (const auto& a : f.agents()) {
    FrameCheck c = check_frame_property(f, p, a);
    if (!c.holds) return c;
  }
  return FrameCheck{};
}

// --- axioms -----------------------------------------------------------------------

const char* to_string(AxiomSchema s) {
  switch (s) {
    case AxiomSchema::K:
      return "K";
    case AxiomSchema::T:
      return "T";
    case AxiomSchema::D:
      return "D";
    case AxiomSchema::Four:
      return "4";
    case AxiomSchema::Five:
      return "5";
  }
  return "?";
}

Formula instantiate(AxiomSchema s, const std::string& x, const Formula& phi, const Formula& psi) {
  switch (s) {
    case AxiomSchema::K:
      return implies(box(x, implies(phi, psi)), implies(box(x, phi), box(x, psi)));
    case AxiomSchema::T:
      return implies(box(x, phi), phi);
    case AxiomSchema::D:
      return implies(box(x, phi), diamond(x, phi));
    case AxiomSchema::Four:
      return implies(box(x, phi), box(x, box(x, phi)));
    case AxiomSchema::Five:
      return implies(neg(box(x, phi)), box(x, neg(box(x, phi))));
  }
  throw std::logic_error("unhandled axiom schema");
}

AxiomReport axiom_validity(const KripkeModel& m, AxiomSchema s, const std::vector<Formula>& probes) {
  if (probes.empty()) throw std::invalid_argument("axiom_validity needs at least one probe formula");
  AxiomReport report{s, 0, {}};
  auto check = [&](const std::string& agent, const Formula& instance) {
    ++report.instances_checked;
    const WorldSet ext = extension(m, instance);
    for (Eigen::Index w = 0; w < ext.size(); ++w)
      if (!ext(w)) {
        report.failures.push_back({agent, instance, static_cast<std::size_t>(w)});
        break;
      }
  };
  for (const auto& agent : m.frame().agents())
    for (const auto& phi : probes) {
      if (s == AxiomSchema::K) {
        for (const auto& psi : probes) check(agent, instantiate(s, agent, phi, psi));
      } else {
        check(agent, instantiate(s, agent, phi, phi));
      }
    }
  return report;
}

}  // namespace frlogic::logic
