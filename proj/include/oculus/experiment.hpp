#pragma once

// Human-rating protocol: every grid state is shown once, in a seeded random
// order, as a movement from neutral; each presentation collects one grade
// on the 1..6 scale.

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oculus/bus.hpp"
#include "oculus/kinematics.hpp"
#include "oculus/mentality.hpp"
#include "oculus/random.hpp"

namespace oculus::experiment {

inline constexpr int kMinGrade = 1;
inline constexpr int kMaxGrade = 6;

struct EvaluationRecord {
  std::string session_id;
  std::string subject_id;
  int trial_index = 0;
  MentalityState state;
  std::string stimulus;
  int grade = 1;
  std::int64_t response_ms = 0;

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

struct SessionConfig {
  std::uint64_t seed = 0;
  std::string subject_id;
  std::string stimulus = "recommended book";
  std::int64_t movement_duration_ms = 800;
  // Empty: derived deterministically from subject and seed.
  std::string session_id;
};

struct Trial {
  int trial_index;
  std::size_t grid_index;
  MentalityState state;
  std::string label;
  std::string stimulus;
  kinematics::ExpressionMovement movement;
};

struct GradeResponse {
  int grade;
  std::int64_t response_ms = 0;
};

class Grader {
 public:
  virtual ~Grader() = default;
  /// nullopt aborts the session (subject left, timeout, end of input).
  virtual std::optional<GradeResponse> grade(const Trial& trial) = 0;
};

/// Stand-in subject: the grade rises with arousal (and a little with
/// pleasure) plus seeded uniform noise, rounded into 1..6.
/// response_ms is always 0 so its sessions are byte-reproducible.
class SyntheticGrader : public Grader {
 public:
  explicit SyntheticGrader(std::uint64_t seed, double noise = 0.5);
  std::optional<GradeResponse> grade(const Trial& trial) override;

  /// Noise-free score in [1, 6] for a state.
  static double score(const MentalityState& s) noexcept;

 private:
  Rng rng_;
  double noise_;
};

/// Interactive grader over text streams (the operator console).
/// Re-prompts until it reads 1..6; "q" or end of input aborts.
class StreamGrader : public Grader {
 public:
  StreamGrader(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  std::optional<GradeResponse> grade(const Trial& trial) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Remote grader: grades arrive as RATING.SUBMIT messages in a mailbox
/// (typically fed by the bus from another connection). Messages for other
/// trials are rejected through `ack`; no grade within `timeout` aborts.
class ChannelGrader : public Grader {
 public:
  using Ack = std::function<void(int trial_index, int grade, bool accepted)>;

  ChannelGrader(std::shared_ptr<bus::Mailbox> ratings, std::chrono::milliseconds timeout,
                Ack ack = {});
  std::optional<GradeResponse> grade(const Trial& trial) override;

 private:
  std::shared_ptr<bus::Mailbox> ratings_;
  std::chrono::milliseconds timeout_;
  Ack ack_;
};

using PresentFn = std::function<void(const Trial&)>;

struct SessionResult {
  std::string session_id;
  std::string subject_id;
  std::string stimulus;
  std::uint64_t seed = 0;
  bool aborted = false;
  std::vector<std::size_t> order;  // grid indices in presentation order
  std::vector<EvaluationRecord> records;
};

/// Seeded Fisher-Yates permutation of the 20 grid indices.
std::vector<std::size_t> presentation_order(std::uint64_t seed);

std::string default_session_id(const SessionConfig& cfg);

/// Presents each grid state once (through `present`, e.g. onto the bus),
/// then asks `grader`. Throws RangeError on an out-of-range grade.
SessionResult run_session(const SessionConfig& cfg, Grader& grader, const PresentFn& present = {});

struct StateSummary {
  std::size_t grid_index;
  MentalityState state;
  std::string label;
  std::size_t n;
  double mean;
  double stddev;  // sample standard deviation; 0 when n < 2
};

struct Summary {
  std::vector<StateSummary> states;  // grid order, observed states only
  // For grade g (index g-1): grid index of the state whose mean grade lies
  // closest to g; ties go to the earlier grid state.
  std::array<std::size_t, kMaxGrade> best_for_grade{};
};

/// Throws RangeError on empty input or any record it cannot place on the grid.
Summary summarize(std::span<const EvaluationRecord> records);

// Persistence. CSV header:
// session_id,subject_id,trial_index,x_pl,x_ar,stimulus,grade,response_ms
void write_jsonl(std::ostream& os, std::span<const EvaluationRecord> records);
std::vector<EvaluationRecord> read_jsonl(std::istream& is);
void write_csv(std::ostream& os, std::span<const EvaluationRecord> records);
void write_summary_csv(std::ostream& os, const Summary& summary);
void write_best_csv(std::ostream& os, const Summary& summary);
/// Session metadata: session_id, subject_id, stimulus, seed, aborted, order.
void write_session_meta(std::ostream& os, const SessionResult& result);
SessionResult read_session_meta(std::istream& is);
void print_summary(std::ostream& os, const Summary& summary);

}  // namespace oculus::experiment
