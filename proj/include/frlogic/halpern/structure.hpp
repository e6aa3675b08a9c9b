#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/kripke.hpp"
#include "frlogic/tolerance.hpp"

namespace frlogic::halpern {

using logic::Formula;
using logic::WorldSet;

class InvalidStructure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Worlds, valuation and one distribution p_x over W per agent. The valuation
/// is carried by a KripkeModel whose relations must be empty.
class ProbabilityStructure {
 public:
  /// Throws InvalidStructure on negative weights, sums off 1 by more than
  /// `tol`, missing agents or non-empty relations.
  ProbabilityStructure(logic::KripkeModel valuation, std::map<std::string, Eigen::VectorXd> weights,
                       double tol = kDefaultTolerance);

  const logic::KripkeModel& valuation() const { return valuation_; }
  std::size_t size() const { return valuation_.size(); }
  const std::vector<std::string>& agents() const { return valuation_.frame().agents(); }
  const Eigen::VectorXd& weights(const std::string& agent) const;  // throws UnknownAgent
  double measure(const std::string& agent, const WorldSet& s) const;

  friend bool operator==(const ProbabilityStructure& a, const ProbabilityStructure& b);

 private:
  logic::KripkeModel valuation_;
  std::map<std::string, Eigen::VectorXd> weights_;
};

/// Per-world distributions: row w of weights(x) is p_x^w.
class GeneralizedProbabilityStructure {
 public:
  GeneralizedProbabilityStructure(logic::KripkeModel valuation, std::map<std::string, Eigen::MatrixXd> weights,
                                  double tol = kDefaultTolerance);

  const logic::KripkeModel& valuation() const { return valuation_; }
  std::size_t size() const { return valuation_.size(); }
  const std::vector<std::string>& agents() const { return valuation_.frame().agents(); }
  const Eigen::MatrixXd& weights(const std::string& agent) const;
  double measure(const std::string& agent, std::size_t world, const WorldSet& s) const;

  friend bool operator==(const GeneralizedProbabilityStructure& a, const GeneralizedProbabilityStructure& b);

 private:
  logic::KripkeModel valuation_;
  std::map<std::string, Eigen::MatrixXd> weights_;
};

/// Same distribution at every world.
GeneralizedProbabilityStructure generalize(const ProbabilityStructure& s);

// --- certainty as probability one ----------------------------------------------
// A box holds at w iff p_x^w(W_phi) >= 1 - tol.

WorldSet extension(const GeneralizedProbabilityStructure& s, const Formula& f, double tol = kDefaultTolerance);
WorldSet extension(const ProbabilityStructure& s, const Formula& f, double tol = kDefaultTolerance);
bool certain(const ProbabilityStructure& s, const std::string& agent, const Formula& f, double tol = kDefaultTolerance);
bool certain_at(const GeneralizedProbabilityStructure& s, const std::string& agent, std::size_t world, const Formula& f,
                double tol = kDefaultTolerance);

// --- certainty as truth on the support --------------------------------------------
// Evaluated in the induced Kripke model, where w R_x w' iff p_x^w(w') > tol.

logic::KripkeModel induced_kripke(const GeneralizedProbabilityStructure& s, double tol = kDefaultTolerance);
logic::KripkeModel induced_kripke(const ProbabilityStructure& s, double tol = kDefaultTolerance);
bool certain_prime(const ProbabilityStructure& s, const std::string& agent, const Formula& f,
                   double tol = kDefaultTolerance);
bool certain_prime_at(const GeneralizedProbabilityStructure& s, const std::string& agent, std::size_t world,
                      const Formula& f, double tol = kDefaultTolerance);

// --- false beliefs ----------------------------------------------------------------

struct FalseBeliefSet {
  std::string agent;
  WorldSet worlds;
  double measure = 0.0;  ///< p_x(worlds)
};

/// Worlds where some probe is false yet certain for `agent`.
FalseBeliefSet false_beliefs(const ProbabilityStructure& s, const std::string& agent, const std::vector<Formula>& probes,
                             double tol = kDefaultTolerance);

// --- soundness probes ---------------------------------------------------------------

enum class System { KD45, S5, T };
/// N0: every structure. N1: every world has positive weight for itself.
enum class StructureClass { N0, N1 };

const char* to_string(System s);
const char* to_string(StructureClass c);
const std::vector<logic::AxiomSchema>& axioms_of(System s);
bool in_class(const GeneralizedProbabilityStructure& s, StructureClass c, double tol = kDefaultTolerance);

struct SoundnessFailure {
  std::size_t structure;
  std::string agent;
  logic::AxiomSchema schema;
  Formula instance;
  std::size_t world;
};

struct SoundnessReport {
  System system;
  std::size_t structures_checked = 0;
  std::size_t instances_checked = 0;
  std::vector<SoundnessFailure> failures;
  bool all_hold() const { return failures.empty(); }
};

/// Evaluates every axiom instance of `system` over the probes (K over probe
/// pairs) at every world of every sample. Throws std::invalid_argument if a
/// sample lies outside `cls` or `probes` is empty.
SoundnessReport soundness_probe(System system, StructureClass cls,
                                const std::vector<GeneralizedProbabilityStructure>& samples,
                                const std::vector<Formula>& probes, double tol = kDefaultTolerance);

}  // namespace frlogic::halpern
