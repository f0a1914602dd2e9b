#include <doctest.h>

#include "oculus/error.hpp"
#include "oculus/intent.hpp"
#include "oculus/rulebase_json.hpp"
#include "support.hpp"

using namespace oculus;
using namespace oculus::fuzzy;
using nlohmann::json;

namespace {

json tiny() {
  return json::parse(R"({
    "inputs": {"e": {"universe": [0, 1], "labels": [
      {"name": "lo", "shape": "shoulder-left", "params": [0, 1]},
      {"name": "hi", "shape": "shoulder-right", "params": [0, 1]}]}},
    "outputs": {"u": {"universe": [-1, 1], "labels": [
      {"name": "neg", "shape": "shoulder-left", "params": [-1, 1]},
      {"name": "pos", "shape": "shoulder-right", "params": [-1, 1]}]}},
    "rules": [
      {"if": {"e": "lo"}, "then": {"u": "neg"}},
      {"if": {"e": "hi"}, "then": {"u": "pos"}, "weight": 0.5}]
  })");
}

}  // namespace

TEST_CASE("a minimal document loads") {
  const auto rb = rulebase_from_json(tiny());
  CHECK(rb.rules().size() == 2);
  CHECK(rb.rules()[0].weight == 1.0);
  CHECK(rb.rules()[1].weight == 0.5);
}

TEST_CASE("unknown fields are rejected at every level") {
  auto top = tiny();
  top["comment"] = "x";
  CHECK_THROWS_AS(rulebase_from_json(top), ConfigError);
  auto var = tiny();
  var["inputs"]["e"]["unit"] = "m";
  CHECK_THROWS_AS(rulebase_from_json(var), ConfigError);
  auto label = tiny();
  label["outputs"]["u"]["labels"][0]["colour"] = "red";
  CHECK_THROWS_AS(rulebase_from_json(label), ConfigError);
  auto rule = tiny();
  rule["rules"][0]["else"] = json::object();
  CHECK_THROWS_AS(rulebase_from_json(rule), ConfigError);
}

TEST_CASE("malformed documents are configuration errors") {
  CHECK_THROWS_AS(parse_rulebase("{"), ConfigError);
  auto shape = tiny();
  shape["inputs"]["e"]["labels"][0]["shape"] = "bell";
  CHECK_THROWS_AS(rulebase_from_json(shape), ConfigError);
  auto arity = tiny();
  arity["inputs"]["e"]["labels"][0]["params"] = json::array({0, 0.5, 1});
  CHECK_THROWS_AS(rulebase_from_json(arity), ConfigError);
  auto weight = tiny();
  weight["rules"][0]["weight"] = 0;
  CHECK_THROWS_AS(rulebase_from_json(weight), ConfigError);
  auto label = tiny();
  label["rules"][0]["if"]["e"] = "middle";
  CHECK_THROWS_AS(rulebase_from_json(label), ConfigError);
  CHECK_THROWS_AS(load_rulebase("/nonexistent/rules.json"), ConfigError);
}

TEST_CASE("a rule base with an uncovered region is rejected") {
  auto doc = tiny();
  doc["rules"].erase(1);
  CHECK_THROWS_AS(rulebase_from_json(doc), ConfigError);
}

TEST_CASE("round trip through JSON") {
  const auto rb = rulebase_from_json(testing::default_rulebase_doc());
  const auto again = rulebase_from_json(rulebase_to_json(rb));
  CHECK(rulebase_to_json(again) == rulebase_to_json(rb));
  CHECK(again.rules().size() == rb.rules().size());
}

TEST_CASE("embedded default equals the shipped file") {
  CHECK(json::parse(default_rulebase_json()) == testing::default_rulebase_doc());
}

TEST_CASE("intent config checks variable names and universes") {
  auto doc = testing::default_rulebase_doc();
  doc["inputs"]["valence"] = doc["inputs"]["arousal"];
  doc["inputs"].erase("arousal");
  for (auto& r : doc["rules"]) {
    if (r["if"].contains("arousal")) {
      r["if"]["valence"] = r["if"]["arousal"];
      r["if"].erase("arousal");
    }
  }
  CHECK_THROWS_AS(IntentConfig(rulebase_from_json(doc)), ConfigError);
  CHECK_THROWS_AS(IntentConfig::from_file("/nonexistent.json"), ConfigError);
}
