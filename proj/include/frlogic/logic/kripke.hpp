#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "frlogic/logic/formula.hpp"

namespace frlogic::logic {

/// Subset of W as a membership mask indexed by world position.
using WorldSet = Eigen::Array<bool, Eigen::Dynamic, 1>;
/// Accessibility relation: entry (w, v) is true iff w R v.
using Relation = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

class UnknownAtom : public std::runtime_error {
 public:
  explicit UnknownAtom(const std::string& name) : std::runtime_error("unknown atom '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownAgent : public std::runtime_error {
 public:
  explicit UnknownAgent(const std::string& id) : std::runtime_error("unknown agent '" + id + "'") {}
};

class UnknownWorld : public std::runtime_error {
 public:
  explicit UnknownWorld(const std::string& name) : std::runtime_error("unknown world '" + name + "'") {}
};

/// Finite world set with one accessibility relation per agent.
class KripkeFrame {
 public:
  KripkeFrame() = default;
  /// Throws std::invalid_argument on duplicate world or agent names.
  KripkeFrame(std::vector<std::string> worlds, std::vector<std::string> agents);

  std::size_t size() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<std::string>& agents() const { return agents_; }

  std::optional<std::size_t> find_world(const std::string& name) const;
  std::size_t world_index(const std::string& name) const;  // throws UnknownWorld
  bool has_agent(const std::string& id) const;

  const Relation& relation(const std::string& agent) const;  // throws UnknownAgent
  Relation& relation(const std::string& agent);
  void set_relation(const std::string& agent, Relation r);
  void add_pair(const std::string& agent, std::size_t from, std::size_t to);

  friend bool operator==(const KripkeFrame& a, const KripkeFrame& b);

 private:
  std::vector<std::string> worlds_;
  std::vector<std::string> agents_;
  std::vector<Relation> relations_;
};

/// Frame plus valuation. Atom order is insertion order.
class KripkeModel {
 public:
  KripkeModel() = default;
  explicit KripkeModel(KripkeFrame frame) : frame_(std::move(frame)) {}

  const KripkeFrame& frame() const { return frame_; }
  KripkeFrame& frame() { return frame_; }
  std::size_t size() const { return frame_.size(); }

  void set_atom(const std::string& name, WorldSet worlds);
  void set_atom_at(const std::string& name, std::size_t world, bool value);
  bool has_atom(const std::string& name) const;
  const WorldSet& atom(const std::string& name) const;  // throws UnknownAtom
  const std::vector<std::string>& atom_names() const { return atom_order_; }

  friend bool operator==(const KripkeModel& a, const KripkeModel& b);

 private:
  KripkeFrame frame_;
  std::vector<std::string> atom_order_;
  std::map<std::string, WorldSet> valuation_;
};

struct PointedModel {
  KripkeModel model;
  std::size_t point = 0;
};

WorldSet empty_set(std::size_t n);
WorldSet full_set(std::size_t n);

/// Extension W_phi of `f`. Throws UnknownAtom / UnknownAgent.
WorldSet extension(const KripkeModel& m, const Formula& f);
bool satisfies(const KripkeModel& m, std::size_t world, const Formula& f);
bool valid_in_model(const KripkeModel& m, const Formula& f);

// --- frame properties ------------------------------------------------------

enum class FrameProperty { Reflexive, Serial, Transitive, Symmetric, Euclidean };

const char* to_string(FrameProperty p);
std::optional<FrameProperty> frame_property_from_string(const std::string& s);
const std::vector<FrameProperty>& all_frame_properties();

struct FrameCheck {
  bool holds = true;
  std::string agent;                 ///< agent of the violation
  std::vector<std::size_t> witness;  ///< violating tuple of world indices
};

FrameCheck check_relation(const Relation& r, FrameProperty p);
FrameCheck check_frame_property(const KripkeFrame& f, FrameProperty p, const std::string& agent);
/// All agents, first violation in agent order.
FrameCheck check_frame_property(const KripkeFrame& f, FrameProperty p);

// --- axiom schemata ----------------------------------------------------------

enum class AxiomSchema { K, T, D, Four, Five };

const char* to_string(AxiomSchema s);
/// psi is used only by K.
Formula instantiate(AxiomSchema s, const std::string& agent, const Formula& phi, const Formula& psi);

struct AxiomFailure {
  std::string agent;
  Formula instance;
  std::size_t world;
};

struct AxiomReport {
  AxiomSchema schema;
  std::size_t instances_checked = 0;
  std::vector<AxiomFailure> failures;
  bool all_valid() const { return failures.empty(); }
};

/// Instantiates the schema for every agent and probe (K: every ordered probe
/// pair) and checks validity in `m`. Throws std::invalid_argument on empty probes.
AxiomReport axiom_validity(const KripkeModel& m, AxiomSchema s, const std::vector<Formula>& probes);

}  // namespace frlogic::logic
