#include "frlogic/scenario/protocol_model.hpp"

#include <functional>

namespace frlogic::scenario {

using logic::atom;
using logic::conj;
using logic::conj_all;
using logic::disj;
using logic::equiv;
using logic::implies;
using logic::neg;

const std::vector<std::string>& fr_agents() {
  static const std::vector<std::string> agents{"a", "c", "d", "g"};
  return agents;
}

std::string OutcomeWorld::name() const {
  return "w_" + std::to_string(a) + "_" + std::to_string(g) + "_" + (c_ok ? "ok" : "fail") + "_" + (d_ok ? "ok" : "fail");
}

std::size_t OutcomeWorld::index() const {
  return static_cast<std::size_t>(a) * 8 + static_cast<std::size_t>(g) * 4 + (c_ok ? 0 : 2) + (d_ok ? 0 : 1);
}

OutcomeWorld OutcomeWorld::from_index(std::size_t i) {
  return {static_cast<int>((i >> 3) & 1U), static_cast<int>((i >> 2) & 1U), ((i >> 1) & 1U) == 0, (i & 1U) == 0};
}

std::optional<OutcomeWorld> OutcomeWorld::parse(const std::string& name) {
  for (std::size_t i = 0; i < kOutcomeWorlds; ++i)
    if (from_index(i).name() == name) return from_index(i);
  return std::nullopt;
}

OutcomeWorld hat_world() { return {1, 1, true, true}; }

namespace {

using Rule = std::function<bool(const OutcomeWorld&)>;

bool always(const OutcomeWorld&) { return true; }

// Atom name and its truth as a function of the outcome tuple, in output order.
const std::vector<std::pair<std::string, Rule>>& valuation_rules() {
  static const std::vector<std::pair<std::string, Rule>> rules = [] {
    std::vector<std::pair<std::string, Rule>> r;
    r.emplace_back(atoms::a0, [](const OutcomeWorld& w) { return w.a == 0; });
    r.emplace_back(atoms::a1, [](const OutcomeWorld& w) { return w.a == 1; });
    r.emplace_back(atoms::g0, [](const OutcomeWorld& w) { return w.g == 0; });
    r.emplace_back(atoms::g1, [](const OutcomeWorld& w) { return w.g == 1; });
    r.emplace_back(atoms::c_ok, [](const OutcomeWorld& w) { return w.c_ok; });
    r.emplace_back(atoms::c_fail, [](const OutcomeWorld& w) { return !w.c_ok; });
    r.emplace_back(atoms::d_ok, [](const OutcomeWorld& w) { return w.d_ok; });
    r.emplace_back(atoms::d_fail, [](const OutcomeWorld& w) { return !w.d_ok; });

    // Preparation: coin, Amanda's memory, l and g before they are touched.
    for (const char* s : {"ket[init;r;0]", "ket[0;a;0]", "ket[0;l;0]", "ket[0;l;t1]", "ket[0;g;0]", "ket[0;g;t1]",
                          "ket[0;g;t']"})
      r.emplace_back(s, always);
    r.emplace_back("ket[init;ralg;0]", always);

    // Amanda's reading fixes the coin indicator and the prepared l.
    r.emplace_back("ind[a;0;r;t1]", [](const OutcomeWorld& w) { return w.a == 0; });
    r.emplace_back("ind[a;1;r;t1]", [](const OutcomeWorld& w) { return w.a == 1; });
    for (const char* t : {"t'", "t2"}) {
      r.emplace_back(std::string("ket[0;l;") + t + "]", [](const OutcomeWorld& w) { return w.a == 0; });
      r.emplace_back(std::string("ket[+;l;") + t + "]", [](const OutcomeWorld& w) { return w.a == 1; });
    }
    r.emplace_back("ket[0,0;lg;t']", [](const OutcomeWorld& w) { return w.a == 0; });
    r.emplace_back("ket[+,0;lg;t']", [](const OutcomeWorld& w) { return w.a == 1; });
    r.emplace_back("ind[a;0,0;lg;t']", [](const OutcomeWorld& w) { return w.a == 0; });
    r.emplace_back("ind[a;+,0;lg;t']", [](const OutcomeWorld& w) { return w.a == 1; });

    r.emplace_back("ind[g;0;l;t2]", [](const OutcomeWorld& w) { return w.g == 0; });
    r.emplace_back("ind[g;1;l;t2]", [](const OutcomeWorld& w) { return w.g == 1; });

    for (const char* t : {"t3", "t4", "5"}) {
      r.emplace_back(std::string("ind[c;ok;ra;") + t + "]", [](const OutcomeWorld& w) { return w.c_ok; });
      r.emplace_back(std::string("ind[c;fail;ra;") + t + "]", [](const OutcomeWorld& w) { return !w.c_ok; });
    }
    for (const char* t : {"t4", "5"}) {
      r.emplace_back(std::string("ind[d;ok;lg;") + t + "]", [](const OutcomeWorld& w) { return w.d_ok; });
      r.emplace_back(std::string("ind[d;fail;lg;") + t + "]", [](const OutcomeWorld& w) { return !w.d_ok; });
    }
    r.emplace_back("ind2[d;c;ok;ra;5]", [](const OutcomeWorld& w) { return w.c_ok; });
    r.emplace_back("ind2[d;c;fail;ra;5]", [](const OutcomeWorld& w) { return !w.c_ok; });
    r.emplace_back("ind2[c;d;ok;lg;5]", [](const OutcomeWorld& w) { return w.d_ok; });
    r.emplace_back("ind2[c;d;fail;lg;5]", [](const OutcomeWorld& w) { return !w.d_ok; });

    // Shared knowledge of the initial state.
    r.emplace_back("ind[c;init;ralg;0]", always);
    r.emplace_back("ind[d;init;ralg;0]", always);
    for (const char* x : {"a", "c", "g"}) r.emplace_back(std::string("ind2[d;") + x + ";init;ralg;0]", always);

    for (const auto& [agent, unitaries] : upsilon_table())
      for (const auto& u : unitaries) r.emplace_back("unitary[" + agent + ";" + u + "]", always);
    return r;
  }();
  return rules;
}

Formula a(const std::string& s) { return atom(s); }

Formula all_of(std::initializer_list<std::string> names) {
  std::vector<Formula> fs;
  for (const auto& n : names) fs.push_back(atom(n));
  return conj_all(fs);
}

// (x or y) and (x -> X) and (y -> Y)
Formula outcome_clause(const std::string& x, const std::string& y, const Formula& on_x, const Formula& on_y) {
  return conj(conj(disj(a(x), a(y)), implies(a(x), on_x)), implies(a(y), on_y));
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& upsilon_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"a", {"U_a"}}, {"c", {"U_t1", "U_t'", "U_t2"}}, {"d", {"U_t1", "U_t'", "U_t2"}}, {"g", {"U_t1", "U_t'", "U_t2"}}};
  return table;
}

std::vector<std::pair<std::string, Formula>> ProtocolClauses::named() const {
  return {{"phi0", phi0},       {"phi1", phi1},     {"phi2", phi2},     {"phi3", phi3},
          {"phi4", phi4},       {"phi5", phi5},     {"tensor", tensor}, {"upsilon", upsilon},
          {"eigen-link", eigen_link}, {"common", common}};
}

const ProtocolClauses& protocol_clauses() {
  static const ProtocolClauses c = [] {
    const Formula phi0 =
        all_of({"ket[init;r;0]", "ket[0;a;0]", "ket[0;l;0]", "ket[0;l;t1]", "ket[0;g;0]", "ket[0;g;t1]", "ket[0;g;t']"});
    const Formula phi1 = outcome_clause(atoms::a0, atoms::a1, all_of({"ind[a;0;r;t1]", "ket[0;l;t']", "ket[0;l;t2]"}),
                                        all_of({"ind[a;1;r;t1]", "ket[+;l;t']", "ket[+;l;t2]"}));
    const Formula phi2 = outcome_clause(atoms::g0, atoms::g1, a("ind[g;0;l;t2]"), a("ind[g;1;l;t2]"));
    const Formula phi3 =
        outcome_clause(atoms::c_ok, atoms::c_fail, all_of({"ind[c;ok;ra;t3]", "ind[c;ok;ra;t4]", "ind[c;ok;ra;5]"}),
                       all_of({"ind[c;fail;ra;t3]", "ind[c;fail;ra;t4]", "ind[c;fail;ra;5]"}));
    const Formula phi4 = outcome_clause(atoms::d_ok, atoms::d_fail, all_of({"ind[d;ok;lg;t4]", "ind[d;ok;lg;5]"}),
                                        all_of({"ind[d;fail;lg;t4]", "ind[d;fail;lg;5]"}));
    const Formula phi5 = conj_all({implies(a(atoms::c_ok), a("ind2[d;c;ok;ra;5]")),
                                   implies(a(atoms::c_fail), a("ind2[d;c;fail;ra;5]")),
                                   implies(a(atoms::d_ok), a("ind2[c;d;ok;lg;5]")),
                                   implies(a(atoms::d_fail), a("ind2[c;d;fail;lg;5]"))});
    const Formula tensor =
        conj_all({equiv(a("ket[init;ralg;0]"), all_of({"ket[init;r;0]", "ket[0;a;0]", "ket[0;l;0]", "ket[0;g;0]"})),
                  equiv(a("ket[+,0;lg;t']"), all_of({"ket[+;l;t']", "ket[0;g;t']"})),
                  equiv(a("ket[0,0;lg;t']"), all_of({"ket[0;l;t']", "ket[0;g;t']"}))});
    std::vector<Formula> ups;
    for (const auto& [agent, unitaries] : upsilon_table())
      for (const auto& u : unitaries) ups.push_back(a("unitary[" + agent + ";" + u + "]"));
    const Formula eigen_link =
        conj(implies(a("ket[+,0;lg;t']"), a("ind[a;+,0;lg;t']")), implies(a("ket[0,0;lg;t']"), a("ind[a;0,0;lg;t']")));
    const Formula common = all_of({"ind[c;init;ralg;0]", "ind[d;init;ralg;0]", "ind2[d;a;init;ralg;0]",
                                   "ind2[d;c;init;ralg;0]", "ind2[d;g;init;ralg;0]"});
    const Formula phi_fr = all_of({atoms::a1, atoms::g1, atoms::c_ok, atoms::d_ok});
    return ProtocolClauses{phi0, phi1, phi2, phi3, phi4, phi5, tensor, conj_all(ups), eigen_link, common, phi_fr};
  }();
  return c;
}

logic::KripkeModel build_worlds() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kOutcomeWorlds; ++i) names.push_back(OutcomeWorld::from_index(i).name());
  logic::KripkeModel m{logic::KripkeFrame(names, fr_agents())};
  for (const auto& [name, rule] : valuation_rules()) {
    logic::WorldSet ext(static_cast<Eigen::Index>(kOutcomeWorlds));
    for (std::size_t i = 0; i < kOutcomeWorlds; ++i) ext(static_cast<Eigen::Index>(i)) = rule(OutcomeWorld::from_index(i));
    m.set_atom(name, ext);
  }
  return m;
}

}  // namespace frlogic::scenario
