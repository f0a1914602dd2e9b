#include <algorithm>
#include <cmath>

#include "oculus/error.hpp"
#include "oculus/fuzzy.hpp"

namespace oculus::fuzzy {

std::vector<LabelDegree> fuzzify(const FuzzyPartition& partition, double x) {
  std::vector<double> d(partition.size());
  partition.degrees(x, d);
  std::vector<LabelDegree> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back({partition.labels()[i].name, d[i]});
  return out;
}

std::vector<std::vector<Activation>> fire(const FuzzyRuleBase& rb, std::span<const double> values) {
  const std::size_t n_in = rb.input_names().size();
  if (values.size() != n_in) {
    throw ConfigError("expected " + std::to_string(n_in) + " input values, got " +
                      std::to_string(values.size()));
  }
  std::vector<std::vector<double>> degrees(n_in);
  for (std::size_t v = 0; v < n_in; ++v) {
    degrees[v].resize(rb.input(v).size());
    rb.input(v).degrees(values[v], degrees[v]);
  }
  std::vector<std::vector<Activation>> acts(rb.output_names().size());
  for (const auto& rule : rb.compiled()) {
    double strength = 1.0;
    for (const auto& t : rule.antecedent) strength = std::min(strength, degrees[t.var][t.label]);
    strength *= rule.weight;
    if (strength <= 0.0) continue;
    for (const auto& t : rule.consequent) acts[t.var].push_back({t.label, strength});
  }
  return acts;
}

AggregatedFuzzySet::AggregatedFuzzySet(Universe universe, std::vector<double> samples)
    : universe_(universe), samples_(std::move(samples)) {
  if (!(universe_.lo < universe_.hi)) throw RangeError("fuzzy set universe must have lo < hi");
  if (samples_.size() < 2) throw RangeError("fuzzy set needs at least 2 samples");
  for (double m : samples_) {
    if (!(m >= 0.0 && m <= 1.0)) throw RangeError("membership sample outside [0, 1]");
  }
}

AggregatedFuzzySet AggregatedFuzzySet::sample(Universe universe, std::size_t n,
                                              const std::function<double(double)>& mu) {
  if (n < 2) throw RangeError("fuzzy set needs at least 2 samples");
  std::vector<double> s(n);
  const double step = universe.width() / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) s[i] = mu(universe.lo + step * static_cast<double>(i));
  return AggregatedFuzzySet(universe, std::move(s));
}

double AggregatedFuzzySet::at(double x) const noexcept {
  const double pos = std::clamp((x - universe_.lo) / step(), 0.0, static_cast<double>(size() - 1));
  const auto i = std::min(static_cast<std::size_t>(pos), size() - 2);
  const double f = pos - static_cast<double>(i);
  return samples_[i] + f * (samples_[i + 1] - samples_[i]);
}

AggregatedFuzzySet AggregatedFuzzySet::resample(std::size_t n) const {
  return sample(universe_, n, [this](double x) { return at(x); });
}

bool AggregatedFuzzySet::is_zero() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double m) { return m == 0.0; });
}

AggregatedFuzzySet aggregate(const FuzzyPartition& output, std::span<const Activation> activations,
                             std::size_t samples, kernels::Backend backend) {
  if (samples < 3) throw RangeError("aggregate needs at least 3 samples");
  // min(a, mu) and min(b, mu) under max collapse to min(max(a, b), mu).
  std::vector<double> level(output.size(), 0.0);
  for (const Activation& a : activations) {
    if (a.label >= level.size()) throw ConfigError("activation label index out of range");
    level[a.label] = std::max(level[a.label], std::clamp(a.strength, 0.0, 1.0));
  }
  std::vector<kernels::Clip> clips;
  for (std::size_t l = 0; l < level.size(); ++l) {
    if (level[l] > 0.0) clips.push_back({&output.labels()[l].mf, level[l]});
  }
  const Universe& u = output.universe();
  std::vector<double> mu(samples, 0.0);
  kernels::aggregate(backend, clips, u.lo, u.width() / static_cast<double>(samples - 1), mu);
  return AggregatedFuzzySet(u, std::move(mu));
}

std::map<std::string, AggregatedFuzzySet, std::less<>> infer(const FuzzyRuleBase& rb,
                                                            const InputMap& inputs,
                                                            std::size_t samples) {
  std::vector<double> values;
  values.reserve(rb.input_names().size());
  for (const std::string& name : rb.input_names()) {
    auto it = inputs.find(name);
    if (it == inputs.end()) throw ConfigError("missing input: " + name);
    values.push_back(it->second);
  }
  for (const auto& [name, value] : inputs) {
    if (!rb.input_index(name)) throw ConfigError("unknown input: " + name);
  }
  const auto acts = fire(rb, values);
  std::map<std::string, AggregatedFuzzySet, std::less<>> out;
  for (std::size_t o = 0; o < acts.size(); ++o) {
    out.emplace(rb.output_names()[o], aggregate(rb.output(o), acts[o], samples));
  }
  return out;
}

double defuzzify_coa(const AggregatedFuzzySet& set, std::size_t resolution,
                     kernels::Backend backend) {
  if (resolution < 3) throw RangeError("center of area needs resolution >= 3");
  const Universe& u = set.universe();
  const double step = u.width() / static_cast<double>(resolution - 1);
  kernels::Moments m;
  if (resolution == set.size()) {
    m = kernels::centroid_moments(backend, set.samples());
  } else {
    const AggregatedFuzzySet r = set.resample(resolution);
    m = kernels::centroid_moments(backend, r.samples());
  }
  if (!(m.mass > 0.0)) throw DegenerateSetError("center of area of an all-zero fuzzy set");
  return std::clamp(u.lo + step * (m.moment / m.mass), u.lo, u.hi);
}

}  // namespace oculus::fuzzy
