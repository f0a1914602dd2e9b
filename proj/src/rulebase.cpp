#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oculus/error.hpp"
#include "oculus/fuzzy.hpp"

namespace oculus::fuzzy {

FuzzyPartition::FuzzyPartition(Universe universe, std::vector<Label> labels)
    : universe_(universe), labels_(std::move(labels)) {
  if (!std::isfinite(universe_.lo) || !std::isfinite(universe_.hi) || !(universe_.lo < universe_.hi)) {
    throw ConfigError("universe must be a finite interval with lo < hi");
  }
  if (labels_.empty()) throw ConfigError("partition has no labels");
  std::set<std::string, std::less<>> seen;
  for (const Label& l : labels_) {
    if (l.name.empty()) throw ConfigError("empty label name");
    if (!seen.insert(l.name).second) throw ConfigError("duplicate label '" + l.name + "'");
    for (double p : l.mf.params()) {
      if (!universe_.contains(p)) {
        std::ostringstream os;
        os << "label '" << l.name << "' breakpoint " << p << " outside universe [" << universe_.lo
           << ", " << universe_.hi << "]";
        throw ConfigError(os.str());
      }
    }
  }
}

FuzzyPartition FuzzyPartition::ruspini(Universe universe, std::vector<std::string> names) {
  if (names.empty()) throw ConfigError("partition has no labels");
  std::vector<Label> labels;
  const std::size_t n = names.size();
  if (n == 1) {
    labels.push_back({std::move(names[0]), MembershipFunction::trapezoidal(universe.lo, universe.lo,
                                                                           universe.hi, universe.hi)});
    return FuzzyPartition(universe, std::move(labels));
  }
  auto peak = [&](std::size_t k) {
    if (k + 1 == n) return universe.hi;
    return universe.lo + universe.width() * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  for (std::size_t k = 0; k < n; ++k) {
    MembershipFunction mf = k == 0       ? MembershipFunction::shoulder_left(peak(0), peak(1))
                            : k + 1 == n ? MembershipFunction::shoulder_right(peak(k - 1), peak(k))
                                         : MembershipFunction::triangular(peak(k - 1), peak(k), peak(k + 1));
    labels.push_back({std::move(names[k]), mf});
  }
  return FuzzyPartition(universe, std::move(labels));
}

std::optional<std::size_t> FuzzyPartition::index_of(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].name == name) return i;
  }
  return std::nullopt;
}

void FuzzyPartition::degrees(double x, std::span<double> out) const {
  if (!universe_.contains(x)) {
    std::ostringstream os;
    os << "value " << x << " outside universe [" << universe_.lo << ", " << universe_.hi << "]";
    throw RangeError(os.str());
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = labels_[i].mf(x);
}

double FuzzyPartition::max_unity_deviation(std::size_t points) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    const double x = universe_.lo + universe_.width() * static_cast<double>(j + 1) /
                                        static_cast<double>(points + 1);
    double sum = 0.0;
    for (const Label& l : labels_) sum += l.mf(x);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

FuzzyRuleBase::FuzzyRuleBase(PartitionMap inputs, PartitionMap outputs, std::vector<FuzzyRule> rules)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), rules_(std::move(rules)) {
  if (inputs_.empty()) throw ConfigError("rule base declares no inputs");
  if (outputs_.empty()) throw ConfigError("rule base declares no outputs");
  if (rules_.empty()) throw ConfigError("rule base has no rules");
  compile();
  check_completeness();
}

std::optional<std::size_t> FuzzyRuleBase::input_index(std::string_view name) const noexcept {
  auto it = std::find(input_names_.begin(), input_names_.end(), name);
  if (it == input_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - input_names_.begin());
}

std::optional<std::size_t> FuzzyRuleBase::output_index(std::string_view name) const noexcept {
  auto it = std::find(output_names_.begin(), output_names_.end(), name);
  if (it == output_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - output_names_.begin());
}

void FuzzyRuleBase::compile() {
  for (const auto& [name, part] : inputs_) {
    input_names_.push_back(name);
    input_parts_.push_back(part);
  }
  for (const auto& [name, part] : outputs_) {
    output_names_.push_back(name);
    output_parts_.push_back(part);
  }
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const FuzzyRule& rule = rules_[r];
    const std::string where = "rule " + std::to_string(r) + ": ";
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) {
      throw ConfigError(where + "weight must lie in (0, 1]");
    }
    if (rule.antecedent.empty()) throw ConfigError(where + "empty antecedent");
    if (rule.consequent.empty()) throw ConfigError(where + "empty consequent");
    CompiledRule compiled{{}, {}, rule.weight};
    auto resolve = [&](const std::vector<std::string>& names, const std::vector<FuzzyPartition>& parts,
                       const std::pair<std::string, std::string>& term, const char* kind) {
      auto it = std::find(names.begin(), names.end(), term.first);
      if (it == names.end()) throw ConfigError(where + "unknown " + kind + " '" + term.first + "'");
      const auto var = static_cast<std::size_t>(it - names.begin());
      auto label = parts[var].index_of(term.second);
      if (!label) {
        throw ConfigError(where + "unknown label '" + term.second + "' for " + kind + " '" +
                          term.first + "'");
      }
      return Term{var, *label};
    };
    for (const auto& term : rule.antecedent) {
      Term t = resolve(input_names_, input_parts_, term, "input");
      for (const Term& prev : compiled.antecedent) {
        if (prev.var == t.var) throw ConfigError(where + "input '" + term.first + "' repeated");
      }
      compiled.antecedent.push_back(t);
    }
    for (const auto& term : rule.consequent) {
      Term t = resolve(output_names_, output_parts_, term, "output");
      for (const Term& prev : compiled.consequent) {
        if (prev.var == t.var) throw ConfigError(where + "output '" + term.first + "' repeated");
      }
      compiled.consequent.push_back(t);
    }
    compiled_.push_back(std::move(compiled));
  }
}

// Memberships are piecewise linear, so whether a label is positive can only
// change at a breakpoint. Probing every breakpoint and the midpoint of every
// gap between consecutive breakpoints covers the whole universe exactly.
void FuzzyRuleBase::check_completeness() const {
  const std::size_t n_in = input_parts_.size();
  std::vector<std::vector<double>> probes(n_in);
  std::vector<std::vector<std::vector<double>>> degrees(n_in);
  for (std::size_t v = 0; v < n_in; ++v) {
    const FuzzyPartition& part = input_parts_[v];
    std::vector<double> knots{part.universe().lo, part.universe().hi};
    for (const Label& l : part.labels()) {
      for (double p : l.mf.params()) knots.push_back(p);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    for (std::size_t k = 0; k < knots.size(); ++k) {
      probes[v].push_back(knots[k]);
      if (k + 1 < knots.size()) probes[v].push_back(0.5 * (knots[k] + knots[k + 1]));
    }
    for (double x : probes[v]) {
      std::vector<double> d(part.size());
      part.degrees(x, d);
      degrees[v].push_back(std::move(d));
    }
  }

  std::vector<std::size_t> at(n_in, 0);
  std::vector<char> covered(output_parts_.size());
  while (true) {
    std::fill(covered.begin(), covered.end(), 0);
    for (const CompiledRule& rule : compiled_) {
      bool fires = true;
      for (const Term& t : rule.antecedent) {
        if (degrees[t.var][at[t.var]][t.label] <= 0.0) {
          fires = false;
          break;
        }
      }
      if (!fires) continue;
      for (const Term& t : rule.consequent) covered[t.var] = 1;
    }
    for (std::size_t o = 0; o < covered.size(); ++o) {
      if (covered[o]) continue;
      std::ostringstream os;
      os << "rule base incomplete: no rule drives output '" << output_names_[o] << "' at";
      for (std::size_t v = 0; v < n_in; ++v) {
        os << (v ? ", " : " ") << input_names_[v] << "=" << probes[v][at[v]];
      }
      throw ConfigError(os.str());
    }
    std::size_t v = 0;
    for (; v < n_in; ++v) {
      if (++at[v] < probes[v].size()) break;
      at[v] = 0;
    }
    if (v == n_in) break;
  }
}

}  // namespace oculus::fuzzy
