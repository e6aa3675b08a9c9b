#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frlogic/logic/formula.hpp"
#include "frlogic/logic/kripke.hpp"

namespace frlogic::scenario {

using logic::Formula;

/// The four agents: Amanda, Chris, David, Gustavo.
const std::vector<std::string>& fr_agents();

/// Outcome tuple (a at t1, g at t2, c at t3, d at t4).
struct OutcomeWorld {
  int a = 0;
  int g = 0;
  bool c_ok = true;
  bool d_ok = true;

  std::string name() const;  ///< e.g. "w_1_1_ok_ok"
  std::size_t index() const;
  static OutcomeWorld from_index(std::size_t i);
  static std::optional<OutcomeWorld> parse(const std::string& name);
  friend bool operator==(const OutcomeWorld&, const OutcomeWorld&) = default;
};

inline constexpr std::size_t kOutcomeWorlds = 16;
/// (1, 1, ok, ok): the point of the contradiction.
OutcomeWorld hat_world();

namespace atoms {
// Measurement outcomes.
inline const std::string a0 = "M[a,t1]=0";
inline const std::string a1 = "M[a,t1]=1";
inline const std::string g0 = "M[g,t2]=0";
inline const std::string g1 = "M[g,t2]=1";
inline const std::string c_ok = "M[c,t3]=ok";
inline const std::string c_fail = "M[c,t3]=fail";
inline const std::string d_ok = "M[d,t4]=ok";
inline const std::string d_fail = "M[d,t4]=fail";
}  // namespace atoms

/// Named global constraints holding at every world of the skeleton.
struct ProtocolClauses {
  Formula phi0, phi1, phi2, phi3, phi4, phi5;
  Formula tensor;      ///< product-state atoms iff their factors
  Formula upsilon;     ///< permitted unitaries per agent
  Formula eigen_link;  ///< known product state yields the indicator state
  Formula common;      ///< initial-state indicators shared by all agents
  Formula phi_fr;      ///< a=1, g=1, c=ok, d=ok

  /// (id, formula) pairs in a fixed order.
  std::vector<std::pair<std::string, Formula>> named() const;
};

const ProtocolClauses& protocol_clauses();

/// Permitted unitaries per agent.
const std::map<std::string, std::vector<std::string>>& upsilon_table();

/// 16 worlds with the valuation derived from the outcome tuple; relations empty.
logic::KripkeModel build_worlds();

}  // namespace frlogic::scenario
