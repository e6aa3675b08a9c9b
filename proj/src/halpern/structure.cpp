#include "frlogic/halpern/structure.hpp"

#include <cmath>

namespace frlogic::halpern {

namespace {

void check_valuation(const logic::KripkeModel& m) {
  if (m.size() == 0) throw InvalidStructure("a structure needs at least one world");
  for (const auto& a : m.frame().agents())
    if (m.frame().relation(a).any()) throw InvalidStructure("relations of agent '" + a + "' must be empty");
}

void check_distribution(const Eigen::Ref<const Eigen::VectorXd>& p, std::size_t n, const std::string& what, double tol) {
  if (static_cast<std::size_t>(p.size()) != n)
    throw InvalidStructure(what + " has " + std::to_string(p.size()) + " weights for " + std::to_string(n) + " worlds");
  if (!p.allFinite() || (p.array() < 0.0).any()) throw InvalidStructure(what + " has a negative or non-finite weight");
  const double sum = p.sum();
  if (std::abs(sum - 1.0) > tol) throw InvalidStructure(what + " sums to " + std::to_string(sum) + ", not 1");
}

template <class Map>
void check_agents(const logic::KripkeModel& m, const Map& weights) {
  for (const auto& a : m.frame().agents())
    if (!weights.count(a)) throw InvalidStructure("missing weights for agent '" + a + "'");
  for (const auto& [a, w] : weights)
    if (!m.frame().has_agent(a)) throw InvalidStructure("weights for unknown agent '" + a + "'");
}

double mass(const Eigen::Ref<const Eigen::VectorXd>& p, const WorldSet& s) { return s.select(p.array(), 0.0).sum(); }

}  // namespace

ProbabilityStructure::ProbabilityStructure(logic::KripkeModel valuation, std::map<std::string, Eigen::VectorXd> weights,
                                           double tol)
    : valuation_(std::move(valuation)), weights_(std::move(weights)) {
  check_valuation(valuation_);
  check_agents(valuation_, weights_);
  for (const auto& [a, p] : weights_) check_distribution(p, size(), "distribution of agent '" + a + "'", tol);
}

const Eigen::VectorXd& ProbabilityStructure::weights(const std::string& agent) const {
  auto it = weights_.find(agent);
  if (it == weights_.end()) throw logic::UnknownAgent(agent);
  return it->second;
}

double ProbabilityStructure::measure(const std::string& agent, const WorldSet& s) const { return mass(weights(agent), s); }

bool operator==(const ProbabilityStructure& a, const ProbabilityStructure& b) {
  if (!(a.valuation_ == b.valuation_) || a.weights_.size() != b.weights_.size()) return false;
  for (const auto& [agent, p] : a.weights_) {
    auto it = b.weights_.find(agent);
    if (it == b.weights_.end() || it->second != p) return false;
  }
  return true;
}

GeneralizedProbabilityStructure::GeneralizedProbabilityStructure(logic::KripkeModel valuation,
                                                                 std::map<std::string, Eigen::MatrixXd> weights,
                                                                 double tol)
    : valuation_(std::move(valuation)), weights_(std::move(weights)) {
  check_valuation(valuation_);
  check_agents(valuation_, weights_);
  for (const auto& [a, p] : weights_) {
    if (static_cast<std::size_t>(p.rows()) != size())
      throw InvalidStructure("agent '" + a + "' needs one distribution per world");
    for (Eigen::Index w = 0; w < p.rows(); ++w)
      check_distribution(p.row(w).transpose(),
                         size(), "distribution of agent '" + a + "' at world '" + valuation_.frame().worlds()[static_cast<std::size_t>(w)] + "'",
                         tol);
  }
}

const Eigen::MatrixXd& GeneralizedProbabilityStructure::weights(const std::string& agent) const {
  auto it = weights_.find(agent);
  if (it == weights_.end()) throw logic::UnknownAgent(agent);
  return it->second;
}

double GeneralizedProbabilityStructure::measure(const std::string& agent, std::size_t world, const WorldSet& s) const {
  return mass(weights(agent).row(static_cast<Eigen::Index>(world)).transpose(), s);
}

bool operator==(const GeneralizedProbabilityStructure& a, const GeneralizedProbabilityStructure& b) {
  if (!(a.valuation_ == b.valuation_) || a.weights_.size() != b.weights_.size()) return false;
  for (const auto& [agent, p] : a.weights_) {
    auto it = b.weights_.find(agent);
    if (it == b.weights_.end() || it->second != p) return false;
  }
  return true;
}

GeneralizedProbabilityStructure generalize(const ProbabilityStructure& s) {
  std::map<std::string, Eigen::MatrixXd> rows;
  const auto n = static_cast<Eigen::Index>(s.size());
  for (const auto& a : s.agents()) rows[a] = s.weights(a).transpose().replicate(n, 1);
  // Rows were already validated against the caller's tolerance.
  return GeneralizedProbabilityStructure(s.valuation(), std::move(rows), 1.0);
}

WorldSet extension(const GeneralizedProbabilityStructure& s, const Formula& f, double tol) {
  const std::size_t n = s.size();
  switch (f.kind()) {
    case logic::Kind::Atom:
      return s.valuation().atom(f.label());
    case logic::Kind::Not:
      return !extension(s, f.child(), tol);
    case logic::Kind::And:
      return extension(s, f.lhs(), tol) && extension(s, f.rhs(), tol);
    case logic::Kind::Or:
      return extension(s, f.lhs(), tol) || extension(s, f.rhs(), tol);
    case logic::Kind::Implies:
      return !extension(s, f.lhs(), tol) || extension(s, f.rhs(), tol);
    case logic::Kind::Equiv:
      return extension(s, f.lhs(), tol) == extension(s, f.rhs(), tol);
    case logic::Kind::Box:
    case logic::Kind::Diamond: {
      const bool box = f.kind() == logic::Kind::Box;
      // Diamond holds iff not-phi has probability below one.
      const WorldSet inner = box ? extension(s, f.child(), tol) : WorldSet(!extension(s, f.child(), tol));
      const Eigen::VectorXd masses = s.weights(f.label()) * inner.cast<double>().matrix();
      WorldSet out(static_cast<Eigen::Index>(n));
      for (Eigen::Index w = 0; w < out.size(); ++w) out(w) = (masses(w) >= 1.0 - tol) == box;
      return out;
    }
  }
  return logic::empty_set(n);
}

WorldSet extension(const ProbabilityStructure& s, const Formula& f, double tol) {
  return extension(generalize(s), f, tol);
}

bool certain(const ProbabilityStructure& s, const std::string& agent, const Formula& f, double tol) {
  return s.measure(agent, extension(s, f, tol)) >= 1.0 - tol;
}

bool certain_at(const GeneralizedProbabilityStructure& s, const std::string& agent, std::size_t world, const Formula& f,
                double tol) {
  return s.measure(agent, world, extension(s, f, tol)) >= 1.0 - tol;
}

logic::KripkeModel induced_kripke(const GeneralizedProbabilityStructure& s, double tol) {
  logic::KripkeModel m = s.valuation();
  for (const auto& a : s.agents()) m.frame().set_relation(a, s.weights(a).array() > tol);
  return m;
}

logic::KripkeModel induced_kripke(const ProbabilityStructure& s, double tol) {
  logic::KripkeModel m = s.valuation();
  const auto n = static_cast<Eigen::Index>(s.size());
  for (const auto& a : s.agents()) m.frame().set_relation(a, (s.weights(a).array() > tol).transpose().replicate(n, 1));
  return m;
}

bool certain_prime(const ProbabilityStructure& s, const std::string& agent, const Formula& f, double tol) {
  const WorldSet support = s.weights(agent).array() > tol;
  return (!support || logic::extension(induced_kripke(s, tol), f)).all();
}

bool certain_prime_at(const GeneralizedProbabilityStructure& s, const std::string& agent, std::size_t world,
                      const Formula& f, double tol) {
  const WorldSet support = s.weights(agent).row(static_cast<Eigen::Index>(world)).transpose().array() > tol;
  return (!support || logic::extension(induced_kripke(s, tol), f)).all();
}

FalseBeliefSet false_beliefs(const ProbabilityStructure& s, const std::string& agent, const std::vector<Formula>& probes,
                             double tol) {
  FalseBeliefSet out{agent, logic::empty_set(s.size()), 0.0};
  for (const auto& phi : probes) {
    if (!certain(s, agent, phi, tol)) continue;
    out.worlds = out.worlds || !extension(s, phi, tol);
  }
  out.measure = s.measure(agent, out.worlds);
  return out;
}

const char* to_string(System s) {
  switch (s) {
    case System::KD45:
      return "KD45";
    case System::S5:
      return "S5";
    case System::T:
      return "T";
  }
  return "?";
}

const char* to_string(StructureClass c) { return c == StructureClass::N0 ? "N0" : "N1"; }

const std::vector<logic::AxiomSchema>& axioms_of(System s) {
  using logic::AxiomSchema;
  static const std::vector<AxiomSchema> kd45{AxiomSchema::K, AxiomSchema::D, AxiomSchema::Four, AxiomSchema::Five};
  static const std::vector<AxiomSchema> s5{AxiomSchema::K, AxiomSchema::T, AxiomSchema::Four, AxiomSchema::Five};
  static const std::vector<AxiomSchema> t{AxiomSchema::K, AxiomSchema::T};
  switch (s) {
    case System::KD45:
      return kd45;
    case System::S5:
      return s5;
    case System::T:
      return t;
  }
  return t;
}

bool in_class(const GeneralizedProbabilityStructure& s, StructureClass c, double tol) {
  if (c == StructureClass::N0) return true;
  for (const auto& a : s.agents())
    if ((s.weights(a).diagonal().array() <= tol).any()) return false;
  return true;
}

SoundnessReport soundness_probe(System system, StructureClass cls,
                                const std::vector<GeneralizedProbabilityStructure>& samples,
                                const std::vector<Formula>& probes, double tol) {
  if (probes.empty()) throw std::invalid_argument("soundness probe needs at least one probe formula");
  SoundnessReport report{system, samples.size(), 0, {}};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!in_class(s, cls, tol))
      throw std::invalid_argument("sample " + std::to_string(i) + " is not in class " + to_string(cls));
    for (const auto& agent : s.agents())
      for (logic::AxiomSchema schema : axioms_of(system))
        for (const auto& phi : probes)
          for (const auto& psi : probes) {
            if (schema != logic::AxiomSchema::K && &psi != &probes.front()) break;
            const Formula inst = logic::instantiate(schema, agent, phi, psi);
            ++report.instances_checked;
            const WorldSet ext = extension(s, inst, tol);
            for (Eigen::Index w = 0; w < ext.size(); ++w)
              if (!ext(w)) {
                report.failures.push_back({i, agent, schema, inst, static_cast<std::size_t>(w)});
                break;
              }
          }
  }
  return report;
}

}  // namespace frlogic::halpern
