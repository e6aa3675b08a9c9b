#pragma once

// Hand-rolled random generators for property tests.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frlogic/halpern/structure.hpp"
#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/kripke.hpp"

namespace frlogic::testing {

using logic::Formula;
using logic::FrameProperty;
using logic::KripkeFrame;
using logic::KripkeModel;
using logic::Relation;

inline std::size_t pick(std::mt19937& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Formula random_formula(std::mt19937& rng, int depth, const std::vector<std::string>& atoms,
                              const std::vector<std::string>& agents) {
  if (depth <= 0 || coin(rng, 0.25)) return logic::atom(atoms[pick(rng, atoms.size())]);
  switch (pick(rng, agents.empty() ? 5 : 7)) {
    case 0:
      return logic::neg(random_formula(rng, depth - 1, atoms, agents));
    case 1:
      return logic::conj(random_formula(rng, depth - 1, atoms, agents), random_formula(rng, depth - 1, atoms, agents));
    case 2:
      return logic::disj(random_formula(rng, depth - 1, atoms, agents), random_formula(rng, depth - 1, atoms, agents));
    case 3:
      return logic::implies(random_formula(rng, depth - 1, atoms, agents), random_formula(rng, depth - 1, atoms, agents));
    case 4:
      return logic::equiv(random_formula(rng, depth - 1, atoms, agents), random_formula(rng, depth - 1, atoms, agents));
    case 5:
      return logic::box(agents[pick(rng, agents.size())], random_formula(rng, depth - 1, atoms, agents));
    default:
      return logic::diamond(agents[pick(rng, agents.size())], random_formula(rng, depth - 1, atoms, agents));
  }
}

inline Relation random_relation(std::mt19937& rng, std::size_t n, double density) {
  Relation r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = coin(rng, density);
  return r;
}

/// Adds pairs until `p` holds (closure for transitive, symmetric, Euclidean).
inline void close_under(std::mt19937& rng, Relation& r, FrameProperty p) {
  const Eigen::Index n = r.rows();
  switch (p) {
    case FrameProperty::Reflexive:
      for (Eigen::Index i = 0; i < n; ++i) r(i, i) = true;
      break;
    case FrameProperty::Serial:
      for (Eigen::Index i = 0; i < n; ++i)
        if (!r.row(i).any()) r(i, static_cast<Eigen::Index>(pick(rng, static_cast<std::size_t>(n)))) = true;
      break;
    case FrameProperty::Symmetric:
      r = r || r.transpose();
      break;
    case FrameProperty::Transitive:
    case FrameProperty::Euclidean:
      for (bool changed = true; changed;) {
        changed = false;
        for (Eigen::Index w = 0; w < n; ++w)
          for (Eigen::Index v = 0; v < n; ++v)
            if (r(w, v))
              for (Eigen::Index u = 0; u < n; ++u) {
                const bool need = p == FrameProperty::Transitive ? (r(v, u) && !r(w, u)) : (r(w, u) && !r(v, u));
                if (!need) continue;
                if (p == FrameProperty::Transitive)
                  r(w, u) = true;
                else
                  r(v, u) = true;
                changed = true;
              }
      }
      break;
  }
}

inline KripkeModel random_model(std::mt19937& rng, std::size_t n, const std::vector<std::string>& agents,
                                const std::vector<std::string>& atoms, double density = 0.35) {
  std::vector<std::string> worlds;
  for (std::size_t i = 0; i < n; ++i) worlds.push_back("w" + std::to_string(i));
  KripkeModel m{KripkeFrame(worlds, agents)};
  for (const auto& a : agents) m.frame().set_relation(a, random_relation(rng, n, density));
  for (const auto& p : atoms) {
    logic::WorldSet ext(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < ext.size(); ++i) ext(i) = coin(rng);
    m.set_atom(p, ext);
  }
  return m;
}

/// Distribution over n worlds with weights 0 or at least 0.01 before
/// normalisation; `must` always gets positive weight.
inline Eigen::VectorXd random_distribution(std::mt19937& rng, std::size_t n, bool full_support = false,
                                           std::optional<std::size_t> must = std::nullopt) {
  std::uniform_real_distribution<double> mass(0.01, 1.0);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (full_support || coin(rng, 0.6)) p(i) = mass(rng);
  if (must) p(static_cast<Eigen::Index>(*must)) = mass(rng);
  if (p.sum() == 0.0) p(static_cast<Eigen::Index>(pick(rng, n))) = mass(rng);
  return p / p.sum();
}

inline KripkeModel random_valuation(std::mt19937& rng, std::size_t n, const std::vector<std::string>& agents,
                                    const std::vector<std::string>& atoms) {
  return random_model(rng, n, agents, atoms, 0.0);
}

inline halpern::ProbabilityStructure random_structure(std::mt19937& rng, std::size_t n,
                                                      const std::vector<std::string>& agents,
                                                      const std::vector<std::string>& atoms, bool full_support = false) {
  std::map<std::string, Eigen::VectorXd> w;
  for (const auto& a : agents) w[a] = random_distribution(rng, n, full_support);
  return halpern::ProbabilityStructure(random_valuation(rng, n, agents, atoms), std::move(w));
}

/// `reflexive` puts positive weight on each world's own index.
inline halpern::GeneralizedProbabilityStructure random_generalized(std::mt19937& rng, std::size_t n,
                                                                   const std::vector<std::string>& agents,
                                                                   const std::vector<std::string>& atoms,
                                                                   bool reflexive = false) {
  std::map<std::string, Eigen::MatrixXd> w;
  for (const auto& a : agents) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      rows.row(static_cast<Eigen::Index>(i)) =
          random_distribution(rng, n, false, reflexive ? std::optional<std::size_t>(i) : std::nullopt).transpose();
    w[a] = rows;
  }
  return halpern::GeneralizedProbabilityStructure(random_valuation(rng, n, agents, atoms), std::move(w));
}

}  // namespace frlogic::testing
