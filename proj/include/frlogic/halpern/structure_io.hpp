#pragma once

#include <optional>
#include <string>
#include <variant>

#include "frlogic/halpern/structure.hpp"
#include "frlogic/logic/model_io.hpp"

namespace frlogic::halpern {

using AnyStructure = std::variant<ProbabilityStructure, GeneralizedProbabilityStructure>;

struct LoadedStructure {
  AnyStructure structure;
  std::optional<std::size_t> point;
};

/// A model file whose top level has a "weights" field. Relations are induced
/// from the weights and may not be given.
bool is_structure_document(const logic::ModelDocument& doc);

/// weights{agent:{world:weight}} gives a ProbabilityStructure and
/// weights{agent:{world:{world:weight}}} a generalized one; omitted worlds weigh
/// 0. Throws logic::ModelFileError with the offending line and field.
LoadedStructure read_structure(const logic::ModelDocument& doc, double tol = kDefaultTolerance);
LoadedStructure parse_structure(const std::string& text, double tol = kDefaultTolerance);
LoadedStructure load_structure_file(const std::string& path, double tol = kDefaultTolerance);

/// Zero weights are omitted.
std::string serialize_structure(const ProbabilityStructure& s, std::optional<std::size_t> point);
std::string serialize_structure(const GeneralizedProbabilityStructure& s, std::optional<std::size_t> point);

}  // namespace frlogic::halpern
