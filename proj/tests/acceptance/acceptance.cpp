// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "oculus/experiment.hpp"
#include "oculus/intent.hpp"
#include "oculus/kinematics.hpp"
#include "oculus/message.hpp"
#include "oculus/random.hpp"
#include "oracle/mamdani_oracle.hpp"
#include "support.hpp"

using namespace oculus;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome bounds() {
  const auto& cfg = IntentConfig::defaults();
  Rng rng(20240501);
  const auto t0 = Clock::now();
  long violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const MentalityState s(rng.uniform(-200, 200), rng.uniform(-200, 200));
    const RecommendationEvent r(1 + static_cast<int>(rng.below(6)));
    const auto d = compute_delta(s, r, cfg);
    const auto t = apply_delta(s, d);
    if (!StateDelta::in_bounds(d.pleasure()) || !StateDelta::in_bounds(d.arousal())) ++violations;
    if (!MentalityState::in_bounds(t.pleasure()) || !MentalityState::in_bounds(t.arousal())) ++violations;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "100000 pairs, " << violations << " violations, " << secs << " s (limit 5 s)";
  return {violations == 0 && secs < 5.0, os.str()};
}

Outcome coa_oracle() {
  const auto& rb = IntentConfig::defaults().rulebase();
  const oracle::Mamdani m(testing::default_rulebase_doc());
  Rng rng(1001);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double pr = rng.unit();
    const double ar = rng.uniform(-200, 200);
    std::vector<double> values(rb.input_names().size());
    values[*rb.input_index("priority")] = pr;
    values[*rb.input_index("arousal")] = ar;
    const auto acts = fuzzy::fire(rb, values);
    for (std::size_t o = 0; o < rb.output_names().size(); ++o) {
      const auto set = fuzzy::aggregate(rb.output(o), acts[o], 101);
      const double got = fuzzy::defuzzify_coa(set, 101);
      const double want = m.crisp({{"priority", pr}, {"arousal", ar}}, rb.output_names()[o], 100001);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  const auto ramp = fuzzy::AggregatedFuzzySet::sample({0, 30}, 1001, [](double x) { return x / 30; });
  const double r = fuzzy::defuzzify_coa(ramp, 1001);
  std::ostringstream os;
  os << std::setprecision(8) << "1000 firings x 2 outputs, worst |res101 - res100001| = " << worst << " (limit 0.5); ramp = " << r;
  return {worst <= 0.5 && std::abs(r - 20.0) <= 0.1, os.str()};
}

Outcome partition_of_unity() {
  const auto& rb = IntentConfig::defaults().rulebase();
  double worst = 0.0;
  int universes = 0;
  for (const auto* map : {&rb.inputs(), &rb.outputs()}) {
    for (const auto& [name, p] : *map) {
      ++universes;
      const double lo = p.universe().lo;
      const double step = p.universe().width() / 10002;
      std::vector<double> deg(p.size());
      for (int i = 1; i <= 10001; ++i) {
        p.degrees(lo + step * i, deg);
        double sum = 0;
        for (double d : deg) sum += d;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  std::ostringstream os;
  os << universes << " universes x 10001 points, worst deviation " << worst << " (limit 1e-9)";
  return {worst <= 1e-9, os.str()};
}

Outcome monotonicity() {
  const auto& cfg = IntentConfig::defaults();
  const auto t0 = Clock::now();
  int violations = 0;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const MentalityState s(-200 + 10.0 * i, -200 + 10.0 * j);
      double prev = -1e300;
      for (int g = 1; g <= 6; ++g) {
        const double d = compute_delta(s, RecommendationEvent(g), cfg).arousal();
        if (d < prev) ++violations;
        prev = d;
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "6 x 41 x 41 sweep, " << violations << " decreases, " << secs << " s (limit 10 s)";
  return {violations == 0 && secs < 10.0, os.str()};
}

Outcome protocol(const fs::path& dir) {
  const std::string cli = OCULUS_CLI;
  const auto a = (dir / "run1").string();
  const auto b = (dir / "run2").string();
  const int ca = testing::run(cli + " experiment --synthetic --seed 7 --subject acceptance --out " + a).code;
  const int cb = testing::run(cli + " experiment --synthetic --seed 7 --subject acceptance --out " + b).code;
  if (ca != 0 || cb != 0) return {false, "cli exited " + std::to_string(ca) + "/" + std::to_string(cb)};
  const std::string csv = testing::slurp(a + ".csv");
  const bool identical = csv == testing::slurp(b + ".csv") &&
                         testing::slurp(a + ".jsonl") == testing::slurp(b + ".jsonl");
  std::istringstream in(testing::slurp(a + ".jsonl"));
  const auto records = experiment::read_jsonl(in);
  std::set<std::size_t> grids;
  bool grades_ok = true;
  for (const auto& r : records) {
    if (auto g = grid_index(r.state)) grids.insert(*g);
    grades_ok = grades_ok && r.grade >= 1 && r.grade <= 6;
  }
  std::ostringstream os;
  os << records.size() << " records, " << grids.size() << " distinct grid states, grades in 1..6: "
     << (grades_ok ? "yes" : "no") << ", byte-identical: " << (identical ? "yes" : "no");
  return {records.size() == 20 && grids.size() == 20 && grades_ok && identical, os.str()};
}

Outcome fan_out(const fs::path& dir) {
  const std::string cli = OCULUS_CLI;
  const auto log = (dir / "serve.ndjson").string();
  const int code = testing::run(cli + " serve --embedded --robots 5 --inject 6 --out " + log).code;
  if (code != 0) return {false, "cli exited " + std::to_string(code)};
  std::istringstream in(testing::slurp(log));
  std::map<bus::MessageType, int> counts;
  std::map<std::string, std::uint64_t> last_seq;
  bool fifo = true;
  bool limits = true;
  for (std::string line; std::getline(in, line);) {
    const auto m = bus::BusMessage::from_line(line);
    ++counts[m.type];
    if (last_seq.count(m.source) && m.seq <= last_seq[m.source]) fifo = false;
    last_seq[m.source] = m.seq;
    if (m.type == bus::MessageType::pose_command) {
      const auto movement = bus::read_pose_command(m);
      for (const auto& k : movement.keyframes()) limits = limits && k.pose.within_limits();
    }
  }
  const int su = counts[bus::MessageType::state_update];
  const int pc = counts[bus::MessageType::pose_command];
  std::ostringstream os;
  os << su << " STATE.UPDATE, " << pc << " POSE.COMMAND, per-source FIFO: " << (fifo ? "yes" : "no")
     << ", poses within limits: " << (limits ? "yes" : "no");
  return {su == 5 && pc == 5 && fifo && limits, os.str()};
}

Outcome kinematics_check() {
  std::set<std::tuple<double, double, double, double, double>> poses;
  for (const auto& s : grid_states().states) {
    const auto p = kinematics::pose_from_state(s);
    poses.emplace(p.lid_left, p.lid_right, p.yaw_left, p.yaw_right, p.pitch);
  }
  Rng rng(4242);
  long bad = 0;
  long frames = 0;
  for (int i = 0; i < 1000; ++i) {
    const MentalityState a(rng.uniform(-200, 200), rng.uniform(-200, 200));
    const MentalityState b(rng.uniform(-200, 200), rng.uniform(-200, 200));
    const auto m = kinematics::movement_between(a, b, 100 + static_cast<std::int64_t>(rng.below(2000)));
    for (const auto& k : m.keyframes()) {
      ++frames;
      if (!k.pose.within_limits()) ++bad;
    }
  }
  std::ostringstream os;
  os << poses.size() << " distinct grid poses; " << frames << " keyframes over 1000 pairs, " << bad
     << " outside limits";
  return {poses.size() == 20 && bad == 0, os.str()};
}

}  // namespace

int main() {
  std::string tmpl = (fs::temp_directory_path() / "oculus-acceptance-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    std::cerr << "cannot create scratch directory\n";
    return 2;
  }
  const fs::path dir = tmpl;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bounds", bounds},
      {"coa-oracle", coa_oracle},
      {"partition-of-unity", partition_of_unity},
      {"monotonicity", monotonicity},
      {"protocol-reproduction", [&] { return protocol(dir); }},
      {"pipeline-fan-out", [&] { return fan_out(dir); }},
      {"kinematics", kinematics_check},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o{false, {}};
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  fs::remove_all(dir);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
