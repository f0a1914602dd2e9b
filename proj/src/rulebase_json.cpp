#include "oculus/rulebase_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "oculus/error.hpp"

namespace oculus::fuzzy {

using nlohmann::json;

namespace {

void only_fields(const json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

const json& required(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

FuzzyPartition parse_partition(const json& doc, const std::string& where) {
  only_fields(doc, {"universe", "labels"}, where);
  const json& u = required(doc, "universe", where);
  if (!u.is_array() || u.size() != 2) throw ConfigError(where + ".universe: expected [lo, hi]");
  Universe universe{number(u[0], where + ".universe"), number(u[1], where + ".universe")};

  const json& labels = required(doc, "labels", where);
  if (!labels.is_array()) throw ConfigError(where + ".labels: expected an array");
  std::vector<Label> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string lw = where + ".labels[" + std::to_string(i) + "]";
    const json& l = labels[i];
    only_fields(l, {"name", "shape", "params"}, lw);
    const json& name = required(l, "name", lw);
    const json& shape = required(l, "shape", lw);
    const json& params = required(l, "params", lw);
    if (!name.is_string()) throw ConfigError(lw + ".name: expected a string");
    if (!shape.is_string()) throw ConfigError(lw + ".shape: expected a string");
    auto s = parse_shape(shape.get<std::string>());
    if (!s) throw ConfigError(lw + ".shape: unknown shape '" + shape.get<std::string>() + "'");
    if (!params.is_array()) throw ConfigError(lw + ".params: expected an array");
    std::vector<double> p;
    for (const json& v : params) p.push_back(number(v, lw + ".params"));
    try {
      out.push_back({name.get<std::string>(), MembershipFunction::make(*s, p)});
    } catch (const ConfigError& e) {
      throw ConfigError(lw + ": " + e.what());
    }
  }
  try {
    return FuzzyPartition(universe, std::move(out));
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

PartitionMap parse_partitions(const json& doc, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected an object");
  PartitionMap out;
  for (const auto& [name, part] : doc.items()) {
    out.emplace(name, parse_partition(part, where + "." + name));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_terms(const json& doc,
                                                             const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected an object");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [var, label] : doc.items()) {
    if (!label.is_string()) throw ConfigError(where + "." + var + ": expected a label name");
    out.emplace_back(var, label.get<std::string>());
  }
  return out;
}

json partition_to_json(const FuzzyPartition& p) {
  json labels = json::array();
  for (const Label& l : p.labels()) {
    json params = json::array();
    for (double v : l.mf.params()) params.push_back(v);
    labels.push_back({{"name", l.name}, {"shape", std::string(to_string(l.mf.shape()))},
                      {"params", params}});
  }
  return {{"universe", {p.universe().lo, p.universe().hi}}, {"labels", labels}};
}

}  // namespace

FuzzyRuleBase rulebase_from_json(const json& doc) {
  only_fields(doc, {"inputs", "outputs", "rules"}, "rulebase");
  PartitionMap inputs = parse_partitions(required(doc, "inputs", "rulebase"), "inputs");
  PartitionMap outputs = parse_partitions(required(doc, "outputs", "rulebase"), "outputs");
  const json& rules = required(doc, "rules", "rulebase");
  if (!rules.is_array()) throw ConfigError("rules: expected an array");
  std::vector<FuzzyRule> parsed;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string where = "rules[" + std::to_string(i) + "]";
    const json& r = rules[i];
    only_fields(r, {"if", "then", "weight"}, where);
    FuzzyRule rule;
    rule.antecedent = parse_terms(required(r, "if", where), where + ".if");
    rule.consequent = parse_terms(required(r, "then", where), where + ".then");
    if (auto w = r.find("weight"); w != r.end()) rule.weight = number(*w, where + ".weight");
    parsed.push_back(std::move(rule));
  }
  return FuzzyRuleBase(std::move(inputs), std::move(outputs), std::move(parsed));
}

FuzzyRuleBase parse_rulebase(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("rule base is not valid JSON: ") + e.what());
  }
  return rulebase_from_json(doc);
}

FuzzyRuleBase load_rulebase(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule base " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_rulebase(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json rulebase_to_json(const FuzzyRuleBase& rb) {
  json inputs = json::object();
  for (const auto& [name, p] : rb.inputs()) inputs[name] = partition_to_json(p);
  json outputs = json::object();
  for (const auto& [name, p] : rb.outputs()) outputs[name] = partition_to_json(p);
  json rules = json::array();
  for (const FuzzyRule& r : rb.rules()) {
    json ante = json::object();
    for (const auto& [var, label] : r.antecedent) ante[var] = label;
    json cons = json::object();
    for (const auto& [var, label] : r.consequent) cons[var] = label;
    rules.push_back({{"if", ante}, {"then", cons}, {"weight", r.weight}});
  }
  return {{"inputs", inputs}, {"outputs", outputs}, {"rules", rules}};
}

}  // namespace oculus::fuzzy
