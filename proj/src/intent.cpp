#include "oculus/intent.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "oculus/error.hpp"
#include "oculus/rulebase_json.hpp"

namespace oculus {

namespace {

const fuzzy::FuzzyPartition& expect_var(const fuzzy::PartitionMap& vars, const char* name,
                                        fuzzy::Universe universe, const char* kind) {
  auto it = vars.find(name);
  if (it == vars.end()) {
    throw ConfigError(std::string("intent rule base must declare ") + kind + " '" + name + "'");
  }
  if (!(it->second.universe() == universe)) {
    throw ConfigError(std::string(kind) + " '" + name + "' has the wrong universe");
  }
  return it->second;
}

// Centroids of symmetric sets come out as +-1e-16 or so; call that zero so a
// neutral event leaves the state exactly where it was.
constexpr double kDeltaSnap = 1e-9;

double clamp_delta(double v) {
  if (std::abs(v) < kDeltaSnap) return 0.0;
  return std::clamp(v, -kDeltaLimit, kDeltaLimit);
}

}  // namespace

RecommendationEvent::RecommendationEvent(int priority, std::string item_id, std::int64_t timestamp_ms)
    : priority_(priority), item_id_(std::move(item_id)), timestamp_ms_(timestamp_ms) {
  if (priority < kMinPriority || priority > kMaxPriority) {
    throw RangeError("recommendation priority must be 1..6, got " + std::to_string(priority));
  }
}

double normalize_priority(int grade) {
  if (grade < kMinPriority || grade > kMaxPriority) {
    throw RangeError("recommendation priority must be 1..6, got " + std::to_string(grade));
  }
  return static_cast<double>(grade - 1) / 5.0;
}

IntentConfig::IntentConfig(fuzzy::FuzzyRuleBase rulebase,
                           std::optional<fuzzy::FuzzyRuleBase> speech_rulebase, std::size_t samples)
    : rulebase_(std::move(rulebase)), speech_(std::move(speech_rulebase)), samples_(samples) {
  if (samples_ < 3) throw ConfigError("intent config needs at least 3 output samples");
  const auto& in = rulebase_.inputs();
  const auto& out = rulebase_.outputs();
  expect_var(in, "priority", {0.0, 1.0}, "input");
  expect_var(in, "arousal", {-kStateLimit, kStateLimit}, "input");
  expect_var(out, "d_pl", {-kDeltaLimit, kDeltaLimit}, "output");
  expect_var(out, "d_ar", {-kDeltaLimit, kDeltaLimit}, "output");
  if (in.size() != 2) throw ConfigError("intent rule base inputs must be exactly {priority, arousal}");
  if (out.size() != 2) throw ConfigError("intent rule base outputs must be exactly {d_pl, d_ar}");
  priority_slot_ = *rulebase_.input_index("priority");
  arousal_slot_ = *rulebase_.input_index("arousal");
  pleasure_out_ = *rulebase_.output_index("d_pl");
  arousal_out_ = *rulebase_.output_index("d_ar");

  if (speech_) {
    for (const auto& [name, part] : speech_->inputs()) {
      if (name == "approval") {
        expect_var(speech_->inputs(), "approval", {-1.0, 1.0}, "speech input");
      } else if (name == "pleasure" || name == "arousal") {
        expect_var(speech_->inputs(), name.c_str(), {-kStateLimit, kStateLimit}, "speech input");
      } else {
        throw ConfigError("unknown speech input '" + name + "'");
      }
    }
    for (const auto& [name, part] : speech_->outputs()) {
      if (name != "d_pl" && name != "d_ar") throw ConfigError("unknown speech output '" + name + "'");
      expect_var(speech_->outputs(), name.c_str(), {-kDeltaLimit, kDeltaLimit}, "speech output");
    }
  }
}

const IntentConfig& IntentConfig::defaults() {
  static const IntentConfig cfg(fuzzy::parse_rulebase(default_rulebase_json()));
  return cfg;
}

IntentConfig IntentConfig::from_file(const std::filesystem::path& path) {
  return IntentConfig(fuzzy::load_rulebase(path));
}

StateDelta compute_delta(const MentalityState& s, const RecommendationEvent& r,
                         const IntentConfig& cfg) {
  const fuzzy::FuzzyRuleBase& rb = cfg.rulebase();
  double values[2];
  values[cfg.priority_slot()] = normalize_priority(r.priority());
  values[cfg.arousal_slot()] = s.arousal();
  const auto acts = fuzzy::fire(rb, values);
  auto centroid = [&](std::size_t out) {
    const auto set = fuzzy::aggregate(rb.output(out), acts[out], cfg.samples());
    return clamp_delta(fuzzy::defuzzify_coa(set, cfg.samples()));
  };
  return StateDelta(centroid(cfg.pleasure_out()), centroid(cfg.arousal_out()));
}

MentalityState step(const MentalityState& s, const RecommendationEvent& r, const IntentConfig& cfg) {
  return apply_delta(s, compute_delta(s, r, cfg));
}

StateDelta compute_speech_delta(const MentalityState& s, const SpeechCategoryEvent& ev,
                                const IntentConfig& cfg) {
  if (!cfg.speech_rulebase()) return StateDelta{};
  const fuzzy::FuzzyRuleBase& rb = *cfg.speech_rulebase();
  std::vector<double> values;
  for (const std::string& name : rb.input_names()) {
    if (name == "approval") {
      values.push_back(ev.approval);
    } else if (name == "pleasure") {
      values.push_back(s.pleasure());
    } else {
      values.push_back(s.arousal());
    }
  }
  const auto acts = fuzzy::fire(rb, values);
  double d[2] = {0.0, 0.0};
  for (std::size_t o = 0; o < acts.size(); ++o) {
    const auto set = fuzzy::aggregate(rb.output(o), acts[o], cfg.samples());
    d[rb.output_names()[o] == "d_pl" ? 0 : 1] = clamp_delta(fuzzy::defuzzify_coa(set, cfg.samples()));
  }
  return StateDelta(d[0], d[1]);
}

std::vector<StateDelta> compute_deltas(std::span<const DeltaQuery> queries, const IntentConfig& cfg,
                                       kernels::Backend backend) {
  std::vector<StateDelta> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  if (backend == kernels::Backend::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[i] = compute_delta(queries[i].state, RecommendationEvent(queries[i].priority), cfg);
    }
    return out;
  }
  // Exceptions must not escape an OpenMP region; capture the first and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = compute_delta(queries[i].state, RecommendationEvent(queries[i].priority), cfg);
    } catch (...) {
#pragma omp critical(oculus_compute_deltas)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace oculus
