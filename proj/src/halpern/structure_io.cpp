#include "frlogic/halpern/structure_io.hpp"

#include <cmath>

namespace frlogic::halpern {

using logic::JsonPath;
using logic::ModelDocument;
using nlohmann::ordered_json;

namespace {

JsonPath key_path(std::initializer_list<std::string> keys) {
  JsonPath p;
  for (const auto& k : keys) p.push_back({k, std::nullopt});
  return p;
}

double weight_at(const ModelDocument& doc, const ordered_json& node, const JsonPath& path) {
  if (!node.is_number()) doc.fail(path, "expected a numeric weight");
  const double w = node.get<double>();
  if (!(w >= 0.0)) doc.fail(path, "weights must be non-negative");
  return w;
}

std::size_t world_key(const ModelDocument& doc, const logic::KripkeFrame& f, const std::string& name,
                      const JsonPath& path) {
  const auto w = f.find_world(name);
  if (!w) doc.fail(path, "unknown world '" + name + "'");
  return *w;
}

ordered_json row_json(const logic::KripkeFrame& f, const Eigen::Ref<const Eigen::VectorXd>& p) {
  ordered_json out = ordered_json::object();
  for (Eigen::Index v = 0; v < p.size(); ++v)
    if (p(v) != 0.0) out[f.worlds()[static_cast<std::size_t>(v)]] = p(v);
  return out;
}

ordered_json base_json(const logic::KripkeModel& m, std::optional<std::size_t> point) {
  ordered_json out = logic::model_to_json(m, point);
  out.erase("relations");
  return out;
}

}  // namespace

bool is_structure_document(const ModelDocument& doc) {
  return doc.root().is_object() && doc.root().contains("weights");
}

LoadedStructure read_structure(const ModelDocument& doc, double tol) {
  logic::LoadedModel base = logic::read_model(doc, {"weights"});
  const ordered_json& root = doc.root();
  if (root.contains("relations"))
    doc.fail(key_path({"relations"}), "structures induce their relations from the weights");
  if (!root.contains("weights")) doc.fail({}, "missing field 'weights'");
  const ordered_json& weights = root["weights"];
  const JsonPath wp = key_path({"weights"});
  if (!weights.is_object()) doc.fail(wp, "expected an object mapping agents to distributions");

  const logic::KripkeFrame& frame = base.model.frame();
  const auto n = static_cast<Eigen::Index>(frame.size());
  std::optional<bool> generalized;
  std::map<std::string, Eigen::VectorXd> simple;
  std::map<std::string, Eigen::MatrixXd> rows;

  for (const auto& item : weights.items()) {
    const JsonPath ap = key_path({"weights", item.key()});
    if (!frame.has_agent(item.key())) doc.fail(ap, "unknown agent '" + item.key() + "'");
    if (!item.value().is_object()) doc.fail(ap, "expected an object keyed by world");
    bool nested = false;
    for (const auto& entry : item.value().items()) {
      nested = entry.value().is_object();
      break;
    }
    if (generalized && *generalized != nested) doc.fail(ap, "all agents need the same weight shape");
    generalized = nested;

    if (!nested) {
      Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
      for (const auto& entry : item.value().items()) {
        const JsonPath ep = key_path({"weights", item.key(), entry.key()});
        p(static_cast<Eigen::Index>(world_key(doc, frame, entry.key(), ep))) = weight_at(doc, entry.value(), ep);
      }
      if (std::abs(p.sum() - 1.0) > tol) doc.fail(ap, "weights sum to " + std::to_string(p.sum()) + ", not 1");
      simple[item.key()] = p;
    } else {
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
      for (const auto& entry : item.value().items()) {
        const JsonPath ep = key_path({"weights", item.key(), entry.key()});
        if (!entry.value().is_object()) doc.fail(ep, "expected an object keyed by world");
        const auto w = static_cast<Eigen::Index>(world_key(doc, frame, entry.key(), ep));
        for (const auto& inner : entry.value().items()) {
          const JsonPath ip = key_path({"weights", item.key(), entry.key(), inner.key()});
          p(w, static_cast<Eigen::Index>(world_key(doc, frame, inner.key(), ip))) = weight_at(doc, inner.value(), ip);
        }
      }
      for (Eigen::Index w = 0; w < n; ++w) {
        const double sum = p.row(w).sum();
        if (std::abs(sum - 1.0) > tol) {
          const std::string& name = frame.worlds()[static_cast<std::size_t>(w)];
          const JsonPath at = item.value().contains(name) ? key_path({"weights", item.key(), name}) : ap;
          doc.fail(at, "weights at world '" + name + "' sum to " + std::to_string(sum) + ", not 1");
        }
      }
      rows[item.key()] = p;
    }
  }
  for (const auto& a : frame.agents())
    if (!simple.count(a) && !rows.count(a)) doc.fail(wp, "missing weights for agent '" + a + "'");

  if (generalized.value_or(false))
    return {GeneralizedProbabilityStructure(std::move(base.model), std::move(rows), tol), base.point};
  return {ProbabilityStructure(std::move(base.model), std::move(simple), tol), base.point};
}

LoadedStructure parse_structure(const std::string& text, double tol) { return read_structure(ModelDocument(text), tol); }

LoadedStructure load_structure_file(const std::string& path, double tol) {
  return parse_structure(logic::read_text_file(path), tol);
}

std::string serialize_structure(const ProbabilityStructure& s, std::optional<std::size_t> point) {
  ordered_json out = base_json(s.valuation(), point);
  ordered_json weights = ordered_json::object();
  for (const auto& a : s.agents()) weights[a] = row_json(s.valuation().frame(), s.weights(a));
  out["weights"] = weights;
  return out.dump(2) + "\n";
}

std::string serialize_structure(const GeneralizedProbabilityStructure& s, std::optional<std::size_t> point) {
  const logic::KripkeFrame& f = s.valuation().frame();
  ordered_json out = base_json(s.valuation(), point);
  ordered_json weights = ordered_json::object();
  for (const auto& a : s.agents()) {
    ordered_json per = ordered_json::object();
    const Eigen::MatrixXd& p = s.weights(a);
    for (Eigen::Index w = 0; w < p.rows(); ++w) per[f.worlds()[static_cast<std::size_t>(w)]] = row_json(f, p.row(w).transpose());
    weights[a] = per;
  }
  out["weights"] = weights;
  return out.dump(2) + "\n";
}

}  // namespace frlogic::halpern
