#pragma once

// Mamdani fuzzy inference (min for AND and implication, max to aggregate)
// with center-of-area defuzzification over uniformly sampled output sets.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oculus/kernels.hpp"
#include "oculus/membership.hpp"

namespace oculus::fuzzy {

inline constexpr std::size_t kDefaultSamples = 1001;

struct Label {
  std::string name;
  MembershipFunction mf;
};

/// Ordered labels over a universe. Every breakpoint must lie inside the
/// universe and label names must be unique.
class FuzzyPartition {
 public:
  FuzzyPartition(Universe universe, std::vector<Label> labels);

  /// Evenly spaced Ruspini partition: shoulders at both ends, triangles in
  /// between, one peak per name.
  static FuzzyPartition ruspini(Universe universe, std::vector<std::string> names);

  const Universe& universe() const noexcept { return universe_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const noexcept;

  /// Degrees of every label at x, in label order. Throws RangeError when x is
  /// outside the universe.
  void degrees(double x, std::span<double> out) const;

  /// Largest deviation of sum-of-degrees from 1 over `points` evenly spaced
  /// interior points.
  double max_unity_deviation(std::size_t points) const;

 private:
  Universe universe_;
  std::vector<Label> labels_;
};

struct LabelDegree {
  std::string label;
  double degree;
};

/// One degree per label, in partition order.
std::vector<LabelDegree> fuzzify(const FuzzyPartition& partition, double x);

/// IF (input is label) AND ... THEN (output is label), ...
struct FuzzyRule {
  std::vector<std::pair<std::string, std::string>> antecedent;
  std::vector<std::pair<std::string, std::string>> consequent;
  double weight = 1.0;
};

using PartitionMap = std::map<std::string, FuzzyPartition, std::less<>>;
using InputMap = std::map<std::string, double, std::less<>>;

class FuzzyRuleBase {
 public:
  /// Validates the rules against the partitions, then checks completeness: every
  /// point of the input product must fire at least one rule for each output.
  /// Throws ConfigError.
  FuzzyRuleBase(PartitionMap inputs, PartitionMap outputs, std::vector<FuzzyRule> rules);

  const PartitionMap& inputs() const noexcept { return inputs_; }
  const PartitionMap& outputs() const noexcept { return outputs_; }
  const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }

  // Positional views in map (name) order; used by the positional inference API.
  const std::vector<std::string>& input_names() const noexcept { return input_names_; }
  const std::vector<std::string>& output_names() const noexcept { return output_names_; }
  const FuzzyPartition& input(std::size_t i) const noexcept { return input_parts_[i]; }
  const FuzzyPartition& output(std::size_t i) const noexcept { return output_parts_[i]; }
  std::optional<std::size_t> input_index(std::string_view name) const noexcept;
  std::optional<std::size_t> output_index(std::string_view name) const noexcept;

  struct Term {
    std::size_t var;
    std::size_t label;
  };
  struct CompiledRule {
    std::vector<Term> antecedent;
    std::vector<Term> consequent;
    double weight;
  };
  const std::vector<CompiledRule>& compiled() const noexcept { return compiled_; }

 private:
  void compile();
  void check_completeness() const;

  PartitionMap inputs_;
  PartitionMap outputs_;
  std::vector<FuzzyRule> rules_;
  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
  std::vector<FuzzyPartition> input_parts_;
  std::vector<FuzzyPartition> output_parts_;
  std::vector<CompiledRule> compiled_;
};

/// A consequent label clipped at a firing strength.
struct Activation {
  std::size_t label;
  double strength;
};

/// Firing strengths per output (indexed like output_names()). Rules that do
/// not fire are omitted. `values` are positional, like input_names().
std::vector<std::vector<Activation>> fire(const FuzzyRuleBase& rb, std::span<const double> values);

/// Output fuzzy set sampled uniformly over its universe: sample i sits at
/// lo + i * (hi - lo) / (n - 1).
class AggregatedFuzzySet {
 public:
  AggregatedFuzzySet(Universe universe, std::vector<double> samples);

  static AggregatedFuzzySet sample(Universe universe, std::size_t n,
                                   const std::function<double(double)>& mu);

  const Universe& universe() const noexcept { return universe_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double step() const noexcept { return universe_.width() / static_cast<double>(size() - 1); }
  double x(std::size_t i) const noexcept { return universe_.lo + step() * static_cast<double>(i); }

  /// Linear interpolation of the stored curve.
  double at(double x) const noexcept;
  AggregatedFuzzySet resample(std::size_t n) const;
  bool is_zero() const noexcept;

  friend bool operator==(const AggregatedFuzzySet&, const AggregatedFuzzySet&) = default;

 private:
  Universe universe_;
  std::vector<double> samples_;
};

/// Pointwise max of the clipped consequent sets of one output partition.
AggregatedFuzzySet aggregate(const FuzzyPartition& output, std::span<const Activation> activations,
                             std::size_t samples = kDefaultSamples,
                             kernels::Backend backend = kernels::Backend::serial);

/// Full Mamdani pass. Throws ConfigError on a missing or unknown input name
/// and RangeError when a value lies outside its universe.
std::map<std::string, AggregatedFuzzySet, std::less<>> infer(
    const FuzzyRuleBase& rb, const InputMap& inputs, std::size_t samples = kDefaultSamples);

/// Center of area, sum(w x mu) / sum(w mu) over `resolution` uniform samples
/// (trapezoid weights w). Resamples when resolution differs from set.size().
/// Throws DegenerateSetError on an all-zero set, RangeError if resolution < 3.
double defuzzify_coa(const AggregatedFuzzySet& set, std::size_t resolution,
                     kernels::Backend backend = kernels::Backend::serial);

}  // namespace oculus::fuzzy
