#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "frlogic/logic/kripke.hpp"

namespace frlogic::logic {

/// Malformed model or structure file. `line` is 1-based; `field` is a dotted
/// path such as "relations.a[2][1]".
class ModelFileError : public std::runtime_error {
 public:
  ModelFileError(std::size_t line, std::string field, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + (field.empty() ? "" : ", field " + field) + ": " + message),
        line_(line),
        field_(std::move(field)) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Path element: object key or array index.
struct PathStep {
  std::string key;
  std::optional<std::size_t> index;
};
using JsonPath = std::vector<PathStep>;

std::string to_string(const JsonPath& path);

/// Line of the value at `path` in `text`, 1 if it cannot be located.
std::size_t line_of(const std::string& text, const JsonPath& path);

/// Parsed document with the source kept for diagnostics.
class ModelDocument {
 public:
  /// Throws ModelFileError on a syntax error.
  explicit ModelDocument(std::string text);

  const nlohmann::ordered_json& root() const { return root_; }
  const std::string& text() const { return text_; }
  [[noreturn]] void fail(const JsonPath& path, const std::string& message) const;

 private:
  std::string text_;
  nlohmann::ordered_json root_;
};

struct LoadedModel {
  KripkeModel model;
  std::optional<std::size_t> point;
};

/// Reads worlds, agents, relations, valuation and point. Keys outside those and
/// `extra_keys` are rejected.
LoadedModel read_model(const ModelDocument& doc, const std::vector<std::string>& extra_keys = {});
LoadedModel parse_model(const std::string& text);
LoadedModel load_model_file(const std::string& path);

nlohmann::ordered_json model_to_json(const KripkeModel& m, std::optional<std::size_t> point);
/// Two-space indented document with a trailing newline.
std::string serialize_model(const KripkeModel& m, std::optional<std::size_t> point);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace frlogic::logic
