#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "oculus/fuzzy.hpp"

namespace oculus::fuzzy {

// Rule-base documents:
//   {"inputs":  {name: {"universe": [lo, hi], "labels": [{"name", "shape", "params"}]}},
//    "outputs": {...same...},
//    "rules":   [{"if": {input: label}, "then": {output: label}, "weight": w}]}
// Unknown fields anywhere are rejected. "weight" is optional (default 1).
FuzzyRuleBase rulebase_from_json(const nlohmann::json& doc);
FuzzyRuleBase parse_rulebase(std::string_view text);
FuzzyRuleBase load_rulebase(const std::filesystem::path& path);

nlohmann::json rulebase_to_json(const FuzzyRuleBase& rb);

}  // namespace oculus::fuzzy
