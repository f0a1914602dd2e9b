#include "oculus/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "oculus/error.hpp"

namespace oculus::experiment {

namespace {

void check_grade(int grade) {
  if (grade < kMinGrade || grade > kMaxGrade) {
    throw RangeError("grade must be 1..6, got " + std::to_string(grade));
  }
}

}  // namespace

SyntheticGrader::SyntheticGrader(std::uint64_t seed, double noise)
    : rng_(seed ^ 0x9e3779b97f4a7c15ULL), noise_(noise) {}

double SyntheticGrader::score(const MentalityState& s) noexcept {
  const double arousal = (s.arousal() + kStateLimit) / (2 * kStateLimit);
  const double pleasure = (s.pleasure() + kStateLimit) / (2 * kStateLimit);
  return 1.0 + 5.0 * (0.8 * arousal + 0.2 * pleasure);
}

std::optional<GradeResponse> SyntheticGrader::grade(const Trial& trial) {
  const double noisy = score(trial.state) + rng_.uniform(-noise_, noise_);
  const int g = static_cast<int>(std::lround(noisy));
  return GradeResponse{std::clamp(g, kMinGrade, kMaxGrade), 0};
}

std::optional<GradeResponse> StreamGrader::grade(const Trial& trial) {
  const auto shown = std::chrono::steady_clock::now();
  while (true) {
    out_ << "trial " << trial.trial_index + 1 << "/" << kGridSize << " [" << trial.stimulus
         << "] grade 1-6 (q to quit): " << std::flush;
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line == "q" || line == "quit") return std::nullopt;
    if (line.size() == 1 && line[0] >= '1' && line[0] <= '6') {
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - shown);
      return GradeResponse{line[0] - '0', elapsed.count()};
    }
    out_ << "please enter a grade from 1 to 6\n";
  }
}

ChannelGrader::ChannelGrader(std::shared_ptr<bus::Mailbox> ratings,
                             std::chrono::milliseconds timeout, Ack ack)
    : ratings_(std::move(ratings)), timeout_(timeout), ack_(std::move(ack)) {}

std::optional<GradeResponse> ChannelGrader::grade(const Trial& trial) {
  const auto shown = std::chrono::steady_clock::now();
  const auto deadline = shown + timeout_;
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    auto msg = ratings_->pop_for(left);
    if (!msg) return std::nullopt;
    // Our own acknowledgments come back through the bus; skip them.
    if (msg->type != bus::MessageType::rating_submit || msg->payload.contains("accepted")) continue;
    const int index = msg->payload.value("trial_index", -1);
    const int g = msg->payload.value("grade", 0);
    const bool accepted = index == trial.trial_index && g >= kMinGrade && g <= kMaxGrade;
    if (ack_) ack_(index, g, accepted);
    if (!accepted) continue;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - shown);
    return GradeResponse{g, elapsed.count()};
  }
}

std::vector<std::size_t> presentation_order(std::uint64_t seed) {
  std::vector<std::size_t> order(kGridSize);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

std::string default_session_id(const SessionConfig& cfg) {
  return cfg.subject_id + "-" + std::to_string(cfg.seed);
}

SessionResult run_session(const SessionConfig& cfg, Grader& grader, const PresentFn& present) {
  if (cfg.subject_id.empty()) throw ConfigError("session needs a subject id");
  SessionResult result;
  result.session_id = cfg.session_id.empty() ? default_session_id(cfg) : cfg.session_id;
  result.subject_id = cfg.subject_id;
  result.stimulus = cfg.stimulus;
  result.seed = cfg.seed;
  result.order = presentation_order(cfg.seed);

  const StateGrid& grid = grid_states();
  const MentalityState neutral;
  for (std::size_t t = 0; t < result.order.size(); ++t) {
    const std::size_t g = result.order[t];
    // Every trial starts from neutral.
    Trial trial{static_cast<int>(t), g, grid.states[g], grid.labels[g], cfg.stimulus,
                kinematics::movement_between(neutral, grid.states[g], cfg.movement_duration_ms)};
    if (present) present(trial);
    std::optional<GradeResponse> response = grader.grade(trial);
    if (!response) {
      result.aborted = true;
      break;
    }
    check_grade(response->grade);
    result.records.push_back({result.session_id, cfg.subject_id, trial.trial_index, trial.state,
                              cfg.stimulus, response->grade, response->response_ms});
  }
  return result;
}

Summary summarize(std::span<const EvaluationRecord> records) {
  if (records.empty()) throw RangeError("cannot summarize an empty record set");
  // Integer accumulators keep the result independent of record order.
  std::array<std::int64_t, kGridSize> n{}, sum{}, sum_sq{};
  for (const EvaluationRecord& r : records) {
    check_grade(r.grade);
    auto g = grid_index(r.state);
    if (!g) throw RangeError("record state is not a grid state");
    ++n[*g];
    sum[*g] += r.grade;
    sum_sq[*g] += static_cast<std::int64_t>(r.grade) * r.grade;
  }
  Summary s;
  const StateGrid& grid = grid_states();
  for (std::size_t k = 0; k < kGridSize; ++k) {
    if (n[k] == 0) continue;
    const double count = static_cast<double>(n[k]);
    const double mean = static_cast<double>(sum[k]) / count;
    double sd = 0.0;
    if (n[k] > 1) {
      // sum (x - mean)^2 = (n*sum_sq - sum^2) / n, exact in integers.
      const std::int64_t ss = n[k] * sum_sq[k] - sum[k] * sum[k];
      sd = std::sqrt(static_cast<double>(ss) / (count * (count - 1.0)));
    }
    s.states.push_back({k, grid.states[k], grid.labels[k], static_cast<std::size_t>(n[k]), mean, sd});
  }
  for (int g = kMinGrade; g <= kMaxGrade; ++g) {
    const StateSummary* best = nullptr;
    for (const StateSummary& st : s.states) {
      if (!best || std::abs(st.mean - g) < std::abs(best->mean - g)) best = &st;
    }
    s.best_for_grade[static_cast<std::size_t>(g - 1)] = best->grid_index;
  }
  return s;
}

}  // namespace oculus::experiment
