#pragma once

#include <optional>
#include <string>

#include "frlogic/logic/kripke.hpp"
#include "frlogic/scenario/protocol_model.hpp"
#include "frlogic/scenario/report.hpp"
#include "frlogic/tolerance.hpp"

namespace frlogic::scenario {

enum class FrameChoice { Reflexive, Serial };

const char* to_string(FrameChoice f);
std::optional<FrameChoice> frame_choice_from_string(const std::string& s);

/// Condition removed by an ablation run.
enum class Drop { None, UForA, StarNecessity, StarWitness };

const char* to_string(Drop d);  ///< "none", "u-a", "star-necessity", "star-witness"
std::optional<Drop> drop_from_string(const std::string& s);

/// Two-world serial, transitive, Euclidean model where [x][y]phi & <x>~phi
/// holds at w0. A reconstruction from the figure's caption properties.
logic::PointedModel fig1_reconstruction();

/// S-instances ~([x]O & [x]~O) over every agent and measurement atom, checked
/// on reflexive and on serial completions of the skeleton.
ScenarioReport run_lemma1(double tol = kDefaultTolerance);

/// [x][y]phi -> [x]phi on reflexive frames, plus a serial, transitive,
/// Euclidean countermodel.
ScenarioReport run_lemma2(double tol = kDefaultTolerance);

/// Reflexive frames, all bridge rules, evaluation at `point`. CONTRADICTION is
/// expected wherever Chris and David both read ok, UNSAT elsewhere.
ScenarioReport run_theorem_fr(OutcomeWorld point = hat_world(), double tol = kDefaultTolerance);

/// Serial frames, all bridge rules.
ScenarioReport run_theorem_fr_star(double tol = kDefaultTolerance);

/// Full search at the point (1,1,ok,ok) with `drop` removed, and the matching
/// theorem trace re-derived from what remains.
ScenarioReport ablate(Drop drop, FrameChoice frame, double tol = kDefaultTolerance);

}  // namespace frlogic::scenario
