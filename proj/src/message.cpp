#include "oculus/message.hpp"

#include <array>
#include <cmath>

#include "oculus/error.hpp"

namespace oculus::bus {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<MessageType, std::string_view>, 7> kNames{{
    {MessageType::register_source, "REGISTER"},
    {MessageType::recommendation, "EVENT.RECOMMENDATION"},
    {MessageType::speech_category, "EVENT.SPEECH_CATEGORY"},
    {MessageType::state_update, "STATE.UPDATE"},
    {MessageType::pose_command, "POSE.COMMAND"},
    {MessageType::rating_submit, "RATING.SUBMIT"},
    {MessageType::error, "ERROR"},
}};

enum class Kind { integer, number, string, array, object };

std::optional<std::string> check(const json& payload, const char* field, Kind kind) {
  auto it = payload.find(field);
  if (it == payload.end()) return std::string("missing field: ") + field;
  bool ok = false;
  switch (kind) {
    case Kind::integer: ok = it->is_number_integer(); break;
    case Kind::number: ok = it->is_number() && std::isfinite(it->get<double>()); break;
    case Kind::string: ok = it->is_string(); break;
    case Kind::array: ok = it->is_array(); break;
    case Kind::object: ok = it->is_object(); break;
  }
  if (!ok) return std::string("bad field type: ") + field;
  return std::nullopt;
}

std::optional<std::string> check_range(const json& payload, const char* field, double lo, double hi) {
  const double v = payload.at(field).get<double>();
  if (v < lo || v > hi) return std::string("field out of range: ") + field;
  return std::nullopt;
}

json pose_to_json(const kinematics::Keyframe& k) {
  return {{"time_ms", k.time_ms},         {"lid_left", k.pose.lid_left},
          {"lid_right", k.pose.lid_right}, {"yaw_left", k.pose.yaw_left},
          {"yaw_right", k.pose.yaw_right}, {"pitch", k.pose.pitch}};
}

}  // namespace

std::string_view to_string(MessageType type) noexcept {
  for (const auto& [t, name] : kNames) {
    if (t == type) return name;
  }
  return "ERROR";
}

std::optional<MessageType> parse_message_type(std::string_view name) noexcept {
  for (const auto& [t, n] : kNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

json BusMessage::to_json() const {
  return {{"type", std::string(bus::to_string(type))},
          {"source", source},
          {"seq", seq},
          {"timestamp_ms", timestamp_ms},
          {"payload", payload}};
}

std::string BusMessage::to_line() const { return to_json().dump(); }

BusMessage BusMessage::from_json(const json& doc) {
  if (!doc.is_object()) throw ProtocolError("message must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "type" && key != "source" && key != "seq" && key != "timestamp_ms" &&
        key != "payload") {
      throw ProtocolError("unknown field: " + key);
    }
  }
  for (const char* f : {"type", "source", "seq", "timestamp_ms", "payload"}) {
    if (!doc.contains(f)) throw ProtocolError(std::string("missing field: ") + f);
  }
  BusMessage m;
  const json& type = doc["type"];
  if (!type.is_string()) throw ProtocolError("bad field type: type");
  auto t = parse_message_type(type.get<std::string>());
  if (!t) throw ProtocolError("unknown message type: " + type.get<std::string>());
  m.type = *t;
  if (!doc["source"].is_string() || doc["source"].get<std::string>().empty()) {
    throw ProtocolError("bad field type: source");
  }
  m.source = doc["source"].get<std::string>();
  if (!doc["seq"].is_number_unsigned() && !(doc["seq"].is_number_integer() && doc["seq"].get<std::int64_t>() >= 0)) {
    throw ProtocolError("bad field type: seq");
  }
  m.seq = doc["seq"].get<std::uint64_t>();
  if (!doc["timestamp_ms"].is_number_integer()) throw ProtocolError("bad field type: timestamp_ms");
  m.timestamp_ms = doc["timestamp_ms"].get<std::int64_t>();
  if (!doc["payload"].is_object()) throw ProtocolError("bad field type: payload");
  m.payload = doc["payload"];
  return m;
}

BusMessage BusMessage::from_line(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error&) {
    throw ProtocolError("message is not valid JSON");
  }
  return from_json(doc);
}

std::optional<std::string> validate_payload(MessageType type, const json& p) {
  if (!p.is_object()) return "payload must be an object";
  std::optional<std::string> err;
  switch (type) {
    case MessageType::register_source:
    case MessageType::error:
      return std::nullopt;
    case MessageType::recommendation:
      if ((err = check(p, "priority", Kind::integer))) return err;
      if ((err = check(p, "item_id", Kind::string))) return err;
      return check_range(p, "priority", kMinPriority, kMaxPriority);
    case MessageType::speech_category:
      if ((err = check(p, "category", Kind::string))) return err;
      if (p.contains("approval")) {
        if ((err = check(p, "approval", Kind::number))) return err;
        return check_range(p, "approval", -1.0, 1.0);
      }
      return std::nullopt;
    case MessageType::state_update:
      for (const char* f : {"robot_id", "x_pl", "x_ar"}) {
        if ((err = check(p, f, f[0] == 'r' ? Kind::integer : Kind::number))) return err;
      }
      if ((err = check_range(p, "x_pl", -kStateLimit, kStateLimit))) return err;
      return check_range(p, "x_ar", -kStateLimit, kStateLimit);
    case MessageType::pose_command:
      if ((err = check(p, "robot_id", Kind::integer))) return err;
      if ((err = check(p, "keyframes", Kind::array))) return err;
      try {
        (void)read_pose_command(BusMessage{type, "x", 0, 0, p});
      } catch (const std::exception& e) {
        return std::string("bad keyframes: ") + e.what();
      }
      return std::nullopt;
    case MessageType::rating_submit:
      if ((err = check(p, "trial_index", Kind::integer))) return err;
      if ((err = check(p, "grade", Kind::integer))) return err;
      if ((err = check_range(p, "trial_index", 0, kGridSize - 1))) return err;
      return check_range(p, "grade", 1, 6);
  }
  return std::nullopt;
}

json recommendation_payload(const RecommendationEvent& ev) {
  return {{"priority", ev.priority()}, {"item_id", ev.item_id()}};
}

RecommendationEvent read_recommendation(const BusMessage& msg) {
  return RecommendationEvent(msg.payload.at("priority").get<int>(),
                             msg.payload.at("item_id").get<std::string>(), msg.timestamp_ms);
}

json speech_payload(const SpeechCategoryEvent& ev) {
  return {{"category", ev.category}, {"approval", ev.approval}};
}

SpeechCategoryEvent read_speech(const BusMessage& msg) {
  SpeechCategoryEvent ev;
  ev.category = msg.payload.at("category").get<std::string>();
  ev.approval = msg.payload.value("approval", 0.0);
  ev.timestamp_ms = msg.timestamp_ms;
  return ev;
}

json state_update_payload(int robot_id, const MentalityState& previous, const MentalityState& state,
                          const StateDelta& delta) {
  return {{"robot_id", robot_id},
          {"x_pl", state.pleasure()},
          {"x_ar", state.arousal()},
          {"x_af", state.affinity()},
          {"d_pl", delta.pleasure()},
          {"d_ar", delta.arousal()},
          {"prev_x_pl", previous.pleasure()},
          {"prev_x_ar", previous.arousal()}};
}

MentalityState read_state_update(const BusMessage& msg) {
  return MentalityState(msg.payload.at("x_pl").get<double>(), msg.payload.at("x_ar").get<double>(),
                        msg.payload.value("x_af", 0.0));
}

json pose_command_payload(int robot_id, const kinematics::ExpressionMovement& movement,
                          int trial_index) {
  json frames = json::array();
  for (const auto& k : movement.keyframes()) frames.push_back(pose_to_json(k));
  json p = {{"robot_id", robot_id}, {"duration_ms", movement.duration_ms()}, {"keyframes", frames}};
  if (trial_index >= 0) p["trial_index"] = trial_index;
  return p;
}

kinematics::ExpressionMovement read_pose_command(const BusMessage& msg) {
  std::vector<kinematics::Keyframe> frames;
  for (const json& f : msg.payload.at("keyframes")) {
    kinematics::EyePose pose{f.at("lid_left").get<double>(), f.at("lid_right").get<double>(),
                             f.at("yaw_left").get<double>(), f.at("yaw_right").get<double>(),
                             f.at("pitch").get<double>()};
    frames.push_back({f.at("time_ms").get<std::int64_t>(), pose});
  }
  return kinematics::ExpressionMovement(std::move(frames));
}

json rating_payload(int trial_index, int grade) {
  return {{"trial_index", trial_index}, {"grade", grade}};
}

json error_payload(std::string_view reason, const BusMessage* about) {
  json p = {{"reason", std::string(reason)}};
  if (about != nullptr) {
    p["ref_type"] = std::string(to_string(about->type));
    p["ref_source"] = about->source;
    p["ref_seq"] = about->seq;
  }
  return p;
}

}  // namespace oculus::bus
