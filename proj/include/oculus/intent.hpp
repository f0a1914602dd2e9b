#pragma once

// Binds the fuzzy engine to (current state, recommendation priority) -> state
// change. Inputs to inference are the normalized priority and the current
// arousal; outputs are the pleasure and arousal deltas.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oculus/fuzzy.hpp"
#include "oculus/kernels.hpp"
#include "oculus/mentality.hpp"

namespace oculus {

inline constexpr int kMinPriority = 1;
inline constexpr int kMaxPriority = 6;
// Grades 3 and 4 both normalize into the flat top of the default MID label.
inline constexpr int kNeutralPriority = 3;

class RecommendationEvent {
 public:
  // Throws RangeError unless 1 <= priority <= 6.
  RecommendationEvent(int priority, std::string item_id = {}, std::int64_t timestamp_ms = 0);

  int priority() const noexcept { return priority_; }
  const std::string& item_id() const noexcept { return item_id_; }
  std::int64_t timestamp_ms() const noexcept { return timestamp_ms_; }

 private:
  int priority_;
  std::string item_id_;
  std::int64_t timestamp_ms_;
};

/// Speech-understanding category event. approval lies in [-1, 1].
struct SpeechCategoryEvent {
  std::string category;
  double approval = 0.0;
  std::int64_t timestamp_ms = 0;
};

/// Grade g -> (g - 1) / 5.
double normalize_priority(int grade);

class IntentConfig {
 public:
  /// The recommendation rule base must declare inputs {priority over [0,1],
  /// arousal over [-200,200]} and outputs {d_pl, d_ar over [-50,50]}. The
  /// optional speech rule base may use inputs from {approval [-1,1],
  /// pleasure, arousal} and outputs from {d_pl, d_ar}. Throws ConfigError.
  explicit IntentConfig(fuzzy::FuzzyRuleBase rulebase,
                        std::optional<fuzzy::FuzzyRuleBase> speech_rulebase = std::nullopt,
                        std::size_t samples = fuzzy::kDefaultSamples);

  /// Shipped default rule base v1.
  static const IntentConfig& defaults();
  static IntentConfig from_file(const std::filesystem::path& path);

  const fuzzy::FuzzyRuleBase& rulebase() const noexcept { return rulebase_; }
  const std::optional<fuzzy::FuzzyRuleBase>& speech_rulebase() const noexcept { return speech_; }
  std::size_t samples() const noexcept { return samples_; }

  // Positions of the named variables inside rulebase().
  std::size_t priority_slot() const noexcept { return priority_slot_; }
  std::size_t arousal_slot() const noexcept { return arousal_slot_; }
  std::size_t pleasure_out() const noexcept { return pleasure_out_; }
  std::size_t arousal_out() const noexcept { return arousal_out_; }

 private:
  fuzzy::FuzzyRuleBase rulebase_;
  std::optional<fuzzy::FuzzyRuleBase> speech_;
  std::size_t samples_;
  std::size_t priority_slot_ = 0;
  std::size_t arousal_slot_ = 0;
  std::size_t pleasure_out_ = 0;
  std::size_t arousal_out_ = 0;
};

/// Contents of data/default_rulebase.json, compiled in.
std::string_view default_rulebase_json();
/// Source-tree location of the shipped default rule base.
std::string_view default_rulebase_path();

StateDelta compute_delta(const MentalityState& s, const RecommendationEvent& r,
                         const IntentConfig& cfg);

/// apply_delta(s, compute_delta(s, r, cfg)).
MentalityState step(const MentalityState& s, const RecommendationEvent& r, const IntentConfig& cfg);

/// Zero unless the config carries a speech rule base.
StateDelta compute_speech_delta(const MentalityState& s, const SpeechCategoryEvent& ev,
                                const IntentConfig& cfg);

struct DeltaQuery {
  MentalityState state;
  int priority;
};

/// compute_delta over a batch. Every element is computed by the same serial
/// code path, so both backends return bitwise-identical results.
std::vector<StateDelta> compute_deltas(std::span<const DeltaQuery> queries, const IntentConfig& cfg,
                                       kernels::Backend backend = kernels::Backend::serial);

}  // namespace oculus
