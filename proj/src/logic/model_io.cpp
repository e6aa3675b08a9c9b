#include "frlogic/logic/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace frlogic::logic {

using nlohmann::ordered_json;

std::string to_string(const JsonPath& path) {
  std::string out;
  for (const auto& step : path) {
    if (step.index) {
      out += "[" + std::to_string(*step.index) + "]";
    } else {
      if (!out.empty()) out += ".";
      out += step.key;
    }
  }
  return out;
}

namespace {

std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Walks the raw text alongside the path; only used to place diagnostics, so it
// gives up (returns nullopt) on anything it does not understand.
class Locator {
 public:
  Locator(const std::string& text, const JsonPath& target) : s_(text), target_(target) {}

  std::optional<std::size_t> find() {
    JsonPath here;
    return value(here);
  }

 private:
  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool matches(const JsonPath& here) const {
    if (here.size() != target_.size()) return false;
    for (std::size_t i = 0; i < here.size(); ++i)
      if (here[i].key != target_[i].key || here[i].index != target_[i].index) return false;
    return true;
  }

  bool prefix(const JsonPath& here) const {
    if (here.size() > target_.size()) return false;
    for (std::size_t i = 0; i < here.size(); ++i)
      if (here[i].key != target_[i].key || here[i].index != target_[i].index) return false;
    return true;
  }

  std::optional<std::string> string() {
    if (pos_ >= s_.size() || s_[pos_] != '"') return std::nullopt;
    std::string out;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') ++pos_;
      if (pos_ < s_.size()) out += s_[pos_++];
    }
    if (pos_ >= s_.size()) return std::nullopt;
    ++pos_;
    return out;
  }

  std::optional<std::size_t> value(JsonPath& here) {
    ws();
    if (pos_ >= s_.size()) return std::nullopt;
    const std::size_t start = pos_;
    if (matches(here)) return start;
    const bool relevant = prefix(here);
    const char c = s_[pos_];
    if (c == '{') {
      ++pos_;
      ws();
      if (pos_ < s_.size() && s_[pos_] == '}') {
        ++pos_;
        return std::nullopt;
      }
      for (;;) {
        ws();
        auto key = string();
        if (!key) return std::nullopt;
        ws();
        if (pos_ >= s_.size() || s_[pos_] != ':') return std::nullopt;
        ++pos_;
        here.push_back({*key, std::nullopt});
        if (relevant) {
          if (auto hit = value(here)) return hit;
        } else if (!skip()) {
          return std::nullopt;
        }
        here.pop_back();
        ws();
        if (pos_ >= s_.size()) return std::nullopt;
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == '}') {
          ++pos_;
          return std::nullopt;
        }
        return std::nullopt;
      }
    }
    if (c == '[') {
      ++pos_;
      ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return std::nullopt;
      }
      for (std::size_t i = 0;; ++i) {
        here.push_back({"", i});
        if (relevant) {
          if (auto hit = value(here)) return hit;
        } else if (!skip()) {
          return std::nullopt;
        }
        here.pop_back();
        ws();
        if (pos_ >= s_.size()) return std::nullopt;
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return std::nullopt;
        }
        return std::nullopt;
      }
    }
    skip();
    return std::nullopt;
  }

  bool skip() {
    ws();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    if (c == '"') return string().has_value();
    if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos_;
      for (;;) {
        ws();
        if (pos_ >= s_.size()) return false;
        if (s_[pos_] == close) {
          ++pos_;
          return true;
        }
        if (s_[pos_] == ',' || s_[pos_] == ':') {
          ++pos_;
          continue;
        }
        if (!skip()) return false;
      }
    }
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    return true;
  }

  const std::string& s_;
  const JsonPath& target_;
  std::size_t pos_ = 0;
};

JsonPath with(JsonPath p, const std::string& key) {
  p.push_back({key, std::nullopt});
  return p;
}

JsonPath with(JsonPath p, std::size_t index) {
  p.push_back({"", index});
  return p;
}

std::vector<std::string> read_names(const ModelDocument& doc, const ordered_json& node, const JsonPath& path,
                                    const char* what) {
  if (!node.is_array()) doc.fail(path, std::string("expected an array of ") + what + " names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_string() || node[i].get<std::string>().empty()) doc.fail(with(path, i), std::string("expected a non-empty ") + what + " name");
    const std::string name = node[i].get<std::string>();
    if (std::find(out.begin(), out.end(), name) != out.end()) doc.fail(with(path, i), std::string("duplicate ") + what + " '" + name + "'");
    out.push_back(name);
  }
  return out;
}

std::size_t world_ref(const ModelDocument& doc, const KripkeFrame& frame, const ordered_json& node, const JsonPath& path) {
  if (!node.is_string()) doc.fail(path, "expected a world name");
  const auto w = frame.find_world(node.get<std::string>());
  if (!w) doc.fail(path, "unknown world '" + node.get<std::string>() + "'");
  return *w;
}

}  // namespace

std::size_t line_of(const std::string& text, const JsonPath& path) {
  Locator loc(text, path);
  if (auto off = loc.find()) return line_at(text, *off);
  return 1;
}

ModelDocument::ModelDocument(std::string text) : text_(std::move(text)) {
  try {
    root_ = ordered_json::parse(text_);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ModelFileError(line_at(text_, byte), "", "syntax error: " + std::string(e.what()));
  }
}

void ModelDocument::fail(const JsonPath& path, const std::string& message) const {
  throw ModelFileError(line_of(text_, path), to_string(path), message);
}

LoadedModel read_model(const ModelDocument& doc, const std::vector<std::string>& extra_keys) {
  const ordered_json& root = doc.root();
  if (!root.is_object()) doc.fail({}, "top level must be an object");
  static const std::vector<std::string> known{"worlds", "agents", "relations", "valuation", "point"};
  for (const auto& item : root.items()) {
    const bool ok = std::find(known.begin(), known.end(), item.key()) != known.end() ||
                    std::find(extra_keys.begin(), extra_keys.end(), item.key()) != extra_keys.end();
    if (!ok) doc.fail({{item.key(), std::nullopt}}, "unexpected field '" + item.key() + "'");
  }
  for (const char* required : {"worlds", "agents"})
    if (!root.contains(required)) doc.fail({}, std::string("missing field '") + required + "'");

  const JsonPath wp{{"worlds", std::nullopt}};
  const JsonPath ap{{"agents", std::nullopt}};
  std::vector<std::string> worlds = read_names(doc, root["worlds"], wp, "world");
  if (worlds.empty()) doc.fail(wp, "a model needs at least one world");
  std::vector<std::string> agents = read_names(doc, root["agents"], ap, "agent");
  LoadedModel out{KripkeModel(KripkeFrame(worlds, agents)), std::nullopt};
  KripkeFrame& frame = out.model.frame();

  if (root.contains("relations")) {
    const JsonPath rp{{"relations", std::nullopt}};
    const auto& rel = root["relations"];
    if (!rel.is_object()) doc.fail(rp, "expected an object mapping agents to pair lists");
    for (const auto& item : rel.items()) {
      const JsonPath agent_path = with(rp, item.key());
      if (!frame.has_agent(item.key())) doc.fail(agent_path, "unknown agent '" + item.key() + "'");
      if (!item.value().is_array()) doc.fail(agent_path, "expected an array of [from, to] pairs");
      for (std::size_t i = 0; i < item.value().size(); ++i) {
        const auto& pair = item.value()[i];
        const JsonPath pp = with(agent_path, i);
        if (!pair.is_array() || pair.size() != 2) doc.fail(pp, "expected a [from, to] pair");
        const std::size_t from = world_ref(doc, frame, pair[0], with(pp, std::size_t{0}));
        const std::size_t to = world_ref(doc, frame, pair[1], with(pp, std::size_t{1}));
        frame.add_pair(item.key(), from, to);
      }
    }
  }

  if (root.contains("valuation")) {
    const JsonPath vp{{"valuation", std::nullopt}};
    const auto& val = root["valuation"];
    if (!val.is_object()) doc.fail(vp, "expected an object mapping atoms to world lists");
    for (const auto& item : val.items()) {
      const JsonPath atom_path = with(vp, item.key());
      try {
        const Formula f = parse(item.key());
        if (f.kind() != Kind::Atom || f.label() != item.key()) doc.fail(atom_path, "'" + item.key() + "' is not an atom");
      } catch (const ParseError& e) {
        doc.fail(atom_path, "'" + item.key() + "' is not an atom: " + e.what());
      }
      if (!item.value().is_array()) doc.fail(atom_path, "expected an array of world names");
      WorldSet ext = empty_set(frame.size());
      for (std::size_t i = 0; i < item.value().size(); ++i)
        ext(static_cast<Eigen::Index>(world_ref(doc, frame, item.value()[i], with(atom_path, i)))) = true;
      out.model.set_atom(item.key(), ext);
    }
  }

  if (root.contains("point")) out.point = world_ref(doc, frame, root["point"], {{"point", std::nullopt}});
  return out;
}

LoadedModel parse_model(const std::string& text) { return read_model(ModelDocument(text)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedModel load_model_file(const std::string& path) { return parse_model(read_text_file(path)); }

ordered_json model_to_json(const KripkeModel& m, std::optional<std::size_t> point) {
  const KripkeFrame& f = m.frame();
  ordered_json out;
  out["worlds"] = f.worlds();
  out["agents"] = f.agents();
  ordered_json rel = ordered_json::object();
  for (const auto& a : f.agents()) {
    ordered_json pairs = ordered_json::array();
    const Relation& r = f.relation(a);
    for (Eigen::Index w = 0; w < r.rows(); ++w)
      for (Eigen::Index v = 0; v < r.cols(); ++v)
        if (r(w, v)) pairs.push_back({f.worlds()[static_cast<std::size_t>(w)], f.worlds()[static_cast<std::size_t>(v)]});
    rel[a] = pairs;
  }
  out["relations"] = rel;
  ordered_json val = ordered_json::object();
  for (const auto& name : m.atom_names()) {
    ordered_json ws = ordered_json::array();
    const WorldSet& ext = m.atom(name);
    for (Eigen::Index w = 0; w < ext.size(); ++w)
      if (ext(w)) ws.push_back(f.worlds()[static_cast<std::size_t>(w)]);
    val[name] = ws;
  }
  out["valuation"] = val;
  if (point) out["point"] = f.worlds().at(*point);
  return out;
}

std::string serialize_model(const KripkeModel& m, std::optional<std::size_t> point) {
  return model_to_json(m, point).dump(2) + "\n";
}

}  // namespace frlogic::logic
