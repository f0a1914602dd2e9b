#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oculus/bus.hpp"
#include "oculus/error.hpp"
#include "oculus/experiment.hpp"
#include "oculus/random.hpp"
#include "oracle/shuffle_oracle.hpp"
#include "support.hpp"

using namespace oculus;
using namespace oculus::experiment;

namespace {

SessionConfig config(std::uint64_t seed = 7) {
  SessionConfig c;
  c.seed = seed;
  c.subject_id = "s01";
  return c;
}

// Fixed grade, optionally stopping after `limit` trials.
class ScriptedGrader : public Grader {
 public:
  explicit ScriptedGrader(int grade, int limit = 1000) : grade_(grade), limit_(limit) {}
  std::optional<GradeResponse> grade(const Trial&) override {
    if (seen_++ >= limit_) return std::nullopt;
    return GradeResponse{grade_, 10};
  }

 private:
  int grade_;
  int limit_;
  int seen_ = 0;
};

EvaluationRecord record(std::size_t grid, int grade) {
  EvaluationRecord r;
  r.session_id = "x";
  r.subject_id = "s";
  r.state = grid_states().states[grid];
  r.grade = grade;
  return r;
}

}  // namespace

TEST_CASE("a completed session has each grid state once") {
  SyntheticGrader grader(7);
  std::vector<Trial> shown;
  const auto r = run_session(config(), grader, [&](const Trial& t) { shown.push_back(t); });
  CHECK_FALSE(r.aborted);
  REQUIRE(r.records.size() == 20);
  CHECK(shown.size() == 20);
  std::set<std::size_t> grids;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    CHECK(rec.trial_index == static_cast<int>(i));
    CHECK(rec.grade >= 1);
    CHECK(rec.grade <= 6);
    CHECK(rec.response_ms == 0);
    grids.insert(*grid_index(rec.state));
    CHECK(shown[i].movement.keyframes().front().pose == kinematics::pose_from_state({0, 0}));
    CHECK(shown[i].movement.keyframes().back().pose == kinematics::pose_from_state(rec.state));
  }
  CHECK(grids.size() == 20);
}

TEST_CASE("presentation order is seeded") {
  CHECK(presentation_order(3) == presentation_order(3));
  CHECK(presentation_order(3) != presentation_order(4));
  for (std::uint64_t seed = 0; seed < 200; ++seed) REQUIRE(presentation_order(seed) == oracle::shuffled_grid(seed));
}

TEST_CASE("seed 42 matches the golden permutation") {
  std::istringstream in(testing::slurp(std::string(OCULUS_GOLDEN_DIR) + "/seed42_order.txt"));
  std::vector<std::size_t> want;
  for (std::size_t v; in >> v;) want.push_back(v);
  CHECK(presentation_order(42) == want);
}

TEST_CASE("an aborted session keeps what it collected") {
  ScriptedGrader grader(4, 7);
  const auto r = run_session(config(), grader);
  CHECK(r.aborted);
  CHECK(r.records.size() == 7);
  std::ostringstream meta;
  write_session_meta(meta, r);
  std::istringstream back(meta.str());
  const auto m = read_session_meta(back);
  CHECK(m.aborted);
  CHECK(m.order == r.order);
  CHECK(m.session_id == r.session_id);
}

TEST_CASE("bad grades and missing subjects are rejected") {
  ScriptedGrader bad(7);
  CHECK_THROWS_AS(run_session(config(), bad), RangeError);
  ScriptedGrader ok(3);
  auto c = config();
  c.subject_id.clear();
  CHECK_THROWS_AS(run_session(c, ok), ConfigError);
}

TEST_CASE("summarize examples") {
  const std::vector<EvaluationRecord> two{record(3, 6), record(3, 4)};
  const auto s = summarize(two);
  REQUIRE(s.states.size() == 1);
  CHECK(s.states[0].mean == 5.0);
  CHECK(s.states[0].n == 2);
  CHECK(s.states[0].stddev == doctest::Approx(std::sqrt(2.0)));

  std::vector<EvaluationRecord> flat;
  for (std::size_t g = 0; g < 20; ++g) flat.push_back(record(19 - g, 4));
  const auto f = summarize(flat);
  for (const auto& st : f.states) CHECK(st.stddev == 0.0);
  for (auto best : f.best_for_grade) CHECK(best == 0);
  CHECK(f.states.front().grid_index == 0);

  CHECK_THROWS_AS(summarize(std::vector<EvaluationRecord>{}), RangeError);
  CHECK_THROWS_AS(summarize(std::vector<EvaluationRecord>{record(0, 9)}), RangeError);
}

TEST_CASE("arousal-driven grades put grade 6 at top arousal") {
  std::vector<EvaluationRecord> recs;
  for (std::size_t g = 0; g < 20; ++g) {
    const auto& s = grid_states().states[g];
    recs.push_back(record(g, 1 + static_cast<int>(std::lround(5 * (s.arousal() + 200) / 400))));
  }
  const auto s = summarize(recs);
  CHECK(grid_states().states[s.best_for_grade[5]].arousal() == 150);
  CHECK(grid_states().states[s.best_for_grade[0]].arousal() == -150);
}

TEST_CASE("summaries ignore record order") {
  SyntheticGrader grader(11);
  auto recs = run_session(config(11), grader).records;
  const auto a = summarize(recs);
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    for (std::size_t i = recs.size() - 1; i > 0; --i) std::swap(recs[i], recs[rng.below(i + 1)]);
    const auto b = summarize(recs);
    CHECK(b.best_for_grade == a.best_for_grade);
    REQUIRE(b.states.size() == a.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      CHECK(b.states[i].mean == a.states[i].mean);
      CHECK(b.states[i].stddev == a.states[i].stddev);
    }
  }
}

TEST_CASE("persistence is byte-deterministic and round-trips") {
  auto once = [] {
    SyntheticGrader grader(7);
    const auto r = run_session(config(), grader);
    std::ostringstream jl;
    std::ostringstream csv;
    write_jsonl(jl, r.records);
    write_csv(csv, r.records);
    return std::pair{jl.str(), csv.str()};
  };
  const auto a = once();
  const auto b = once();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.second.rfind("session_id,subject_id,trial_index,x_pl,x_ar,stimulus,grade,response_ms\n", 0) == 0);
  CHECK(std::count(a.second.begin(), a.second.end(), '\n') == 21);
  std::istringstream in(a.first);
  const auto back = read_jsonl(in);
  SyntheticGrader grader(7);
  CHECK(back == run_session(config(), grader).records);
}

TEST_CASE("CSV quotes awkward stimulus text") {
  auto r = record(0, 2);
  r.stimulus = "book, \"vol 2\"";
  std::ostringstream os;
  write_csv(os, std::vector<EvaluationRecord>{r});
  CHECK(os.str().find("\"book, \"\"vol 2\"\"\"") != std::string::npos);
}

TEST_CASE("channel grader takes grades for the current trial only") {
  auto box = std::make_shared<bus::Mailbox>();
  std::vector<std::tuple<int, int, bool>> acks;
  ChannelGrader grader(box, std::chrono::milliseconds(200),
                       [&](int t, int g, bool ok) { acks.emplace_back(t, g, ok); });
  auto rating = [](int trial, int grade) {
    return bus::BusMessage{bus::MessageType::rating_submit, "ui", 1, 0, bus::rating_payload(trial, grade)};
  };
  auto echo = rating(0, 2);
  echo.payload["accepted"] = true;
  box->deliver(echo);
  box->deliver(rating(3, 5));
  box->deliver(rating(0, 6));
  const Trial t{0, 0, {}, "", "", kinematics::movement_between({}, {}, 100)};
  const auto g = grader.grade(t);
  REQUIRE(g.has_value());
  CHECK(g->grade == 6);
  REQUIRE(acks.size() == 2);
  CHECK(acks[0] == std::tuple{3, 5, false});
  CHECK(acks[1] == std::tuple{0, 6, true});
  CHECK_FALSE(grader.grade(t).has_value());
}

TEST_CASE("stream grader re-prompts and aborts on q") {
  std::istringstream in("7\nx\n5\nq\n");
  std::ostringstream out;
  StreamGrader grader(in, out);
  const Trial t{0, 0, {}, "", "", kinematics::movement_between({}, {}, 100)};
  CHECK(grader.grade(t)->grade == 5);
  CHECK_FALSE(grader.grade(t).has_value());
}
