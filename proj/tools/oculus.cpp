// oculus: operator entry point for the eye-robot intent simulator.
//
//   oculus serve        bus + robots over TCP (NDJSON) and the HTTP bridge
//   oculus publish      inject one event into a running bus
//   oculus experiment   run a 20-trial rating session
//   oculus pose-trace   export a movement as CSV
//
// Exit codes: 0 success, 2 environment, 3 configuration, 64 usage.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "oculus/error.hpp"
#include "oculus/experiment.hpp"
#include "oculus/intent.hpp"
#include "oculus/kinematics.hpp"
#include "oculus/net.hpp"
#include "oculus/robot.hpp"
#include "oculus/rulebase_json.hpp"

namespace {

using namespace oculus;

constexpr int kExitOk = 0;
constexpr int kExitEnvironment = 2;
constexpr int kExitConfig = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct Options {
  std::string host = "127.0.0.1";
  int port = bus::kDefaultPort;
  int bridge_port = 0;
  bool no_bridge = false;
  std::uint64_t seed = 0;
  std::string rulebase;
  std::string out;
  int robots = bus::kDefaultRobotCount;
  bool synthetic = false;
  bool remote = false;
  bool embedded = false;
  std::vector<int> inject;
  std::string subject;
  std::string stimulus = "recommended book";
  std::string from = "0,0";
  std::string to;
  std::int64_t duration_ms = bus::kDefaultMovementMs;
  double rate_hz = 50.0;
  std::int64_t run_ms = 0;
  std::int64_t grade_timeout_ms = 120000;
  std::int64_t wait_ms = 500;
  int priority = kNeutralPriority;
  std::string item = "item";
  std::string source = "cli";
  std::string speech;
};

void check_port(int port) {
  if (port < 1024 || port > 65535) throw UsageError("--port must be in 1024..65535");
}

std::shared_ptr<const IntentConfig> load_config(const Options& opt) {
  std::string path = opt.rulebase;
  if (path.empty()) {
    if (const char* env = std::getenv("OCULUS_RULEBASE"); env != nullptr && *env != '\0') path = env;
  }
  if (path.empty()) return std::make_shared<const IntentConfig>(IntentConfig::defaults());
  return std::make_shared<const IntentConfig>(IntentConfig::from_file(path));
}

MentalityState parse_state(const std::string& text, const char* flag) {
  std::istringstream in(text);
  double pl = 0.0;
  double ar = 0.0;
  char comma = 0;
  if (!(in >> pl >> comma >> ar) || comma != ',' || !(in >> std::ws).eof()) {
    throw UsageError(std::string(flag) + " expects PLEASURE,AROUSAL, got '" + text + "'");
  }
  try {
    return MentalityState(pl, ar);
  } catch (const RangeError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw EnvironmentError("cannot write " + path);
  return f;
}

int cmd_serve(const Options& opt) {
  if (opt.robots < 1) throw UsageError("--robots must be at least 1");
  if (!opt.embedded) check_port(opt.port);
  auto config = load_config(opt);

  const std::string log_path = opt.out.empty() ? "oculus-session.ndjson" : opt.out;
  std::ofstream log = open_out(log_path);
  // Embedded runs use a zero clock so their logs are byte-reproducible.
  bus::Bus bus(opt.embedded ? bus::Clock([] { return std::int64_t{0}; }) : bus::Clock(bus::system_clock_ms));
  auto sink = std::make_shared<bus::LogSink>(log);
  bus.subscribe_all(sink);
  bus.subscribe_rejections(sink);
  bus::Fleet fleet(bus, config, {opt.robots, opt.duration_ms});

  if (opt.embedded) {
    bus::Publisher cli(bus, opt.source);
    for (int priority : opt.inject) {
      bus::PublishResult r =
          cli.publish(bus::MessageType::recommendation, bus::recommendation_payload(RecommendationEvent(priority, opt.item)));
      std::cout << "delivered to " << r.delivered << " subscriber(s)\n";
      fleet.pump();
    }
    return kExitOk;
  }

  std::optional<net::TcpServer> tcp;
  std::optional<net::HttpBridge> bridge;
  tcp.emplace(bus, static_cast<std::uint16_t>(opt.port), opt.host);
  if (!opt.no_bridge) {
    const int bport = opt.bridge_port != 0 ? opt.bridge_port : opt.port + 1;
    bridge.emplace(bus, static_cast<std::uint16_t>(bport), opt.host);
  }
  fleet.start();
  std::cerr << "oculus: bus on " << opt.host << ":" << tcp->port();
  if (bridge) std::cerr << ", bridge on http://" << opt.host << ":" << bridge->port();
  std::cerr << ", " << fleet.size() << " robot(s), log " << log_path << std::endl;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const auto started = std::chrono::steady_clock::now();
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    if (opt.run_ms > 0 && std::chrono::steady_clock::now() - started >= std::chrono::milliseconds(opt.run_ms)) break;
  }
  if (bridge) bridge->stop();
  tcp->stop();
  fleet.wait_idle(std::chrono::seconds(2));
  fleet.stop();
  return kExitOk;
}

int cmd_publish(const Options& opt) {
  check_port(opt.port);
  bus::BusMessage event;
  if (!opt.speech.empty()) {
    event = {bus::MessageType::speech_category, opt.source, 1, bus::system_clock_ms(),
             bus::speech_payload({opt.speech, 0.0, 0})};
  } else {
    if (opt.priority < kMinPriority || opt.priority > kMaxPriority) throw UsageError("--priority must be 1..6");
    event = {bus::MessageType::recommendation, opt.source, 1, bus::system_clock_ms(),
             bus::recommendation_payload(RecommendationEvent(opt.priority, opt.item))};
  }
  net::TcpClient client(opt.host, static_cast<std::uint16_t>(opt.port));
  client.send({bus::MessageType::register_source, opt.source, 0, bus::system_clock_ms(), nlohmann::json::object()});
  client.send(event);
  // Echo what the bus says back until it goes quiet.
  int errors = 0;
  while (auto msg = client.receive(std::chrono::milliseconds(opt.wait_ms))) {
    std::cout << msg->to_line() << '\n';
    if (msg->type == bus::MessageType::error && msg->source == bus::kBusSource) ++errors;
  }
  return errors == 0 ? kExitOk : kExitConfig;
}

int cmd_experiment(const Options& opt) {
  if (opt.subject.empty()) throw UsageError("--subject is required");
  experiment::SessionConfig cfg;
  cfg.seed = opt.seed;
  cfg.subject_id = opt.subject;
  cfg.stimulus = opt.stimulus;
  cfg.movement_duration_ms = opt.duration_ms;
  if (cfg.movement_duration_ms < kinematics::kMinMovementMs) throw UsageError("--duration-ms must be at least 100");

  experiment::SessionResult result;
  if (opt.synthetic) {
    experiment::SyntheticGrader grader(opt.seed);
    result = experiment::run_session(cfg, grader);
  } else if (opt.remote) {
    check_port(opt.port);
    net::TcpClient client(opt.host, static_cast<std::uint16_t>(opt.port));
    const std::string source = "harness-" + experiment::default_session_id(cfg);
    std::uint64_t seq = 0;
    std::mutex send_mu;
    auto send = [&](bus::MessageType type, nlohmann::json payload) {
      std::lock_guard lock(send_mu);
      client.send({type, source, seq++, bus::system_clock_ms(), std::move(payload)});
    };
    send(bus::MessageType::register_source, {{"role", "harness"}});
    auto ratings = std::make_shared<bus::Mailbox>();
    std::jthread reader([&](std::stop_token stop) {
      while (!stop.stop_requested()) {
        auto msg = client.receive(std::chrono::milliseconds(100));
        if (msg && msg->type == bus::MessageType::rating_submit) ratings->deliver(*msg);
      }
    });
    experiment::ChannelGrader grader(
        ratings, std::chrono::milliseconds(opt.grade_timeout_ms), [&](int trial, int grade, bool accepted) {
          if (grade >= experiment::kMinGrade && grade <= experiment::kMaxGrade && trial >= 0 &&
              trial < static_cast<int>(kGridSize)) {
            auto p = bus::rating_payload(trial, grade);
            p["accepted"] = accepted;
            send(bus::MessageType::rating_submit, p);
          } else {
            send(bus::MessageType::error, bus::error_payload("rejected rating"));
          }
        });
    result = experiment::run_session(cfg, grader, [&](const experiment::Trial& t) {
      send(bus::MessageType::pose_command, bus::pose_command_payload(0, t.movement, t.trial_index));
    });
  } else {
    experiment::StreamGrader grader(std::cin, std::cout);
    result = experiment::run_session(cfg, grader, [](const experiment::Trial& t) {
      std::cout << "showing state " << t.label << " (" << t.state.pleasure() << ", " << t.state.arousal() << ")\n";
    });
  }

  const std::string prefix = opt.out.empty() ? "session" : opt.out;
  {
    auto f = open_out(prefix + ".jsonl");
    experiment::write_jsonl(f, result.records);
  }
  {
    auto f = open_out(prefix + ".csv");
    experiment::write_csv(f, result.records);
  }
  {
    auto f = open_out(prefix + ".session.json");
    experiment::write_session_meta(f, result);
  }
  std::cout << "session " << result.session_id << ": " << result.records.size() << " record(s), aborted: "
            << (result.aborted ? "true" : "false") << '\n';
  if (!result.records.empty()) {
    const auto summary = experiment::summarize(result.records);
    auto f = open_out(prefix + ".summary.csv");
    experiment::write_summary_csv(f, summary);
    auto b = open_out(prefix + ".best.csv");
    experiment::write_best_csv(b, summary);
    experiment::print_summary(std::cout, summary);
  }
  return kExitOk;
}

int cmd_pose_trace(const Options& opt) {
  if (opt.to.empty()) throw UsageError("--to is required");
  const MentalityState from = parse_state(opt.from, "--from");
  const MentalityState to = parse_state(opt.to, "--to");
  if (opt.duration_ms < kinematics::kMinMovementMs) throw UsageError("--duration-ms must be at least 100");
  if (!(opt.rate_hz > 0.0)) throw UsageError("--rate-hz must be positive");
  const auto movement = kinematics::movement_between(from, to, opt.duration_ms, opt.rate_hz);
  if (opt.out.empty()) {
    kinematics::write_csv(std::cout, movement);
  } else {
    auto f = open_out(opt.out);
    kinematics::write_csv(f, movement);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eye-robot intent expression simulator"};
  app.require_subcommand(1);
  Options opt;

  auto* serve = app.add_subcommand("serve", "Run the bus with simulated robots");
  serve->add_option("--port", opt.port, "TCP port for the NDJSON bus")->capture_default_str();
  serve->add_option("--host", opt.host, "Address to bind")->capture_default_str();
  serve->add_option("--bridge-port", opt.bridge_port, "HTTP bridge port (default: port + 1)");
  serve->add_flag("--no-bridge", opt.no_bridge, "Do not start the HTTP bridge");
  serve->add_option("--rulebase", opt.rulebase, "Rule base JSON (default: $OCULUS_RULEBASE or built-in)");
  serve->add_option("--robots", opt.robots, "Number of robots")->capture_default_str();
  serve->add_option("--out", opt.out, "Session log (NDJSON)");
  serve->add_option("--duration-ms", opt.duration_ms, "Movement duration")->capture_default_str();
  serve->add_option("--run-ms", opt.run_ms, "Stop after this many ms (0: until signalled)");
  serve->add_flag("--embedded", opt.embedded, "No sockets: inject events in-process and exit");
  serve->add_option("--inject", opt.inject, "Priority of a recommendation to inject (embedded, repeatable)")
      ->check(CLI::Range(kMinPriority, kMaxPriority));
  serve->add_option("--item", opt.item, "Item id for injected events");
  serve->add_option("--source", opt.source, "Source name for injected events");

  auto* publish = app.add_subcommand("publish", "Send one event to a running bus");
  publish->add_option("--port", opt.port)->capture_default_str();
  publish->add_option("--host", opt.host)->capture_default_str();
  publish->add_option("--priority", opt.priority, "Recommendation priority 1..6")->capture_default_str();
  publish->add_option("--item", opt.item, "Recommended item id");
  publish->add_option("--speech", opt.speech, "Send a speech-category event instead");
  publish->add_option("--source", opt.source, "Source name")->capture_default_str();
  publish->add_option("--wait-ms", opt.wait_ms, "How long to echo bus traffic")->capture_default_str();

  auto* exp = app.add_subcommand("experiment", "Run a 20-trial rating session");
  exp->add_option("--seed", opt.seed, "Presentation order seed")->capture_default_str();
  exp->add_option("--subject", opt.subject, "Subject id")->required();
  exp->add_flag("--synthetic", opt.synthetic, "Use the synthetic subject");
  exp->add_flag("--remote", opt.remote, "Collect grades from a running bus (RATING.SUBMIT)");
  exp->add_option("--port", opt.port)->capture_default_str();
  exp->add_option("--host", opt.host)->capture_default_str();
  exp->add_option("--out", opt.out, "Output prefix (.jsonl, .csv, .session.json, .summary.csv)");
  exp->add_option("--stimulus", opt.stimulus)->capture_default_str();
  exp->add_option("--duration-ms", opt.duration_ms)->capture_default_str();
  exp->add_option("--grade-timeout-ms", opt.grade_timeout_ms)->capture_default_str();
  exp->add_option("--rulebase", opt.rulebase, "Accepted for symmetry; sessions use no inference");

  auto* trace = app.add_subcommand("pose-trace", "Write a movement as CSV");
  trace->add_option("--from", opt.from, "Start state PLEASURE,AROUSAL")->capture_default_str();
  trace->add_option("--to", opt.to, "End state PLEASURE,AROUSAL");
  trace->add_option("--duration-ms", opt.duration_ms)->capture_default_str();
  trace->add_option("--rate-hz", opt.rate_hz)->capture_default_str();
  trace->add_option("--out", opt.out, "Output CSV (default stdout)");
  trace->add_option("--seed", opt.seed, "Unused; traces are deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*serve) return cmd_serve(opt);
    if (*publish) return cmd_publish(opt);
    if (*exp) return cmd_experiment(opt);
    if (*trace) return cmd_pose_trace(opt);
  } catch (const UsageError& e) {
    std::cerr << "oculus: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "oculus: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EnvironmentError& e) {
    std::cerr << "oculus: " << e.what() << '\n';
    return kExitEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "oculus: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitUsage;
}
