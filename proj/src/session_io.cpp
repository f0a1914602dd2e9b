#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "oculus/error.hpp"
#include "oculus/experiment.hpp"

namespace oculus::experiment {

using nlohmann::json;

namespace {

std::string number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json record_to_json(const EvaluationRecord& r) {
  return {{"session_id", r.session_id}, {"subject_id", r.subject_id},
          {"trial_index", r.trial_index}, {"x_pl", r.state.pleasure()},
          {"x_ar", r.state.arousal()},    {"stimulus", r.stimulus},
          {"grade", r.grade},             {"response_ms", r.response_ms}};
}

}  // namespace

void write_jsonl(std::ostream& os, std::span<const EvaluationRecord> records) {
  for (const EvaluationRecord& r : records) os << record_to_json(r).dump() << '\n';
}

std::vector<EvaluationRecord> read_jsonl(std::istream& is) {
  std::vector<EvaluationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      EvaluationRecord r;
      r.session_id = j.at("session_id").get<std::string>();
      r.subject_id = j.at("subject_id").get<std::string>();
      r.trial_index = j.at("trial_index").get<int>();
      r.state = MentalityState(j.at("x_pl").get<double>(), j.at("x_ar").get<double>());
      r.stimulus = j.at("stimulus").get<std::string>();
      r.grade = j.at("grade").get<int>();
      r.response_ms = j.at("response_ms").get<std::int64_t>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ConfigError("session line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_csv(std::ostream& os, std::span<const EvaluationRecord> records) {
  os << "session_id,subject_id,trial_index,x_pl,x_ar,stimulus,grade,response_ms\n";
  for (const EvaluationRecord& r : records) {
    os << csv_field(r.session_id) << ',' << csv_field(r.subject_id) << ',' << r.trial_index << ','
       << number(r.state.pleasure()) << ',' << number(r.state.arousal()) << ','
       << csv_field(r.stimulus) << ',' << r.grade << ',' << r.response_ms << '\n';
  }
}

void write_summary_csv(std::ostream& os, const Summary& summary) {
  os << "grid_index,label,x_pl,x_ar,n,mean,std\n";
  for (const StateSummary& s : summary.states) {
    os << s.grid_index << ',' << s.label << ',' << number(s.state.pleasure()) << ','
       << number(s.state.arousal()) << ',' << s.n << ',' << number(s.mean) << ','
       << number(s.stddev) << '\n';
  }
}

void write_best_csv(std::ostream& os, const Summary& summary) {
  const StateGrid& grid = grid_states();
  os << "grade,grid_index,label,x_pl,x_ar\n";
  for (int g = kMinGrade; g <= kMaxGrade; ++g) {
    const std::size_t k = summary.best_for_grade[static_cast<std::size_t>(g - 1)];
    os << g << ',' << k << ',' << grid.labels[k] << ',' << number(grid.states[k].pleasure()) << ','
       << number(grid.states[k].arousal()) << '\n';
  }
}

void write_session_meta(std::ostream& os, const SessionResult& result) {
  json j = {{"session_id", result.session_id},
            {"subject_id", result.subject_id},
            {"stimulus", result.stimulus},
            {"seed", result.seed},
            {"aborted", result.aborted},
            {"trials_completed", result.records.size()},
            {"order", result.order}};
  os << j.dump(2) << '\n';
}

SessionResult read_session_meta(std::istream& is) {
  try {
    const json j = json::parse(is);
    SessionResult r;
    r.session_id = j.at("session_id").get<std::string>();
    r.subject_id = j.at("subject_id").get<std::string>();
    r.stimulus = j.at("stimulus").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.aborted = j.at("aborted").get<bool>();
    r.order = j.at("order").get<std::vector<std::size_t>>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("session metadata: ") + e.what());
  }
}

void print_summary(std::ostream& os, const Summary& summary) {
  char line[128];
  os << " grid  state                      n   mean    std\n";
  for (const StateSummary& s : summary.states) {
    std::snprintf(line, sizeof line, " %4zu  %-24s %3zu  %5.2f  %5.2f\n", s.grid_index,
                  s.label.c_str(), s.n, s.mean, s.stddev);
    os << line;
  }
  const StateGrid& grid = grid_states();
  os << "best state per grade:\n";
  for (int g = kMinGrade; g <= kMaxGrade; ++g) {
    const std::size_t k = summary.best_for_grade[static_cast<std::size_t>(g - 1)];
    os << "  " << g << ": " << grid.labels[k] << '\n';
  }
}

}  // namespace oculus::experiment
