#pragma once

// Bus message envelope and per-type payload schemas. On the wire each message
// is one line of JSON: {"type","source","seq","timestamp_ms","payload"}.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "oculus/intent.hpp"
#include "oculus/kinematics.hpp"
#include "oculus/mentality.hpp"

namespace oculus::bus {

enum class MessageType {
  register_source,
  recommendation,
  speech_category,
  state_update,
  pose_command,
  rating_submit,
  error,
};

inline constexpr MessageType kAllMessageTypes[] = {
    MessageType::register_source, MessageType::recommendation, MessageType::speech_category,
    MessageType::state_update,    MessageType::pose_command,   MessageType::rating_submit,
    MessageType::error,
};

std::string_view to_string(MessageType type) noexcept;
std::optional<MessageType> parse_message_type(std::string_view name) noexcept;

struct BusMessage {
  MessageType type = MessageType::error;
  std::string source;
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  nlohmann::json payload = nlohmann::json::object();

  nlohmann::json to_json() const;
  /// Single line, no trailing newline.
  std::string to_line() const;

  /// Envelope decoding only; payload contents are checked by
  /// validate_payload. Throws ProtocolError.
  static BusMessage from_json(const nlohmann::json& doc);
  static BusMessage from_line(std::string_view line);

  friend bool operator==(const BusMessage&, const BusMessage&) = default;
};

/// Reason the payload is malformed for its type, e.g. "missing field: priority".
std::optional<std::string> validate_payload(MessageType type, const nlohmann::json& payload);

// Payload builders and readers. Readers assume validate_payload passed.

nlohmann::json recommendation_payload(const RecommendationEvent& ev);
RecommendationEvent read_recommendation(const BusMessage& msg);

nlohmann::json speech_payload(const SpeechCategoryEvent& ev);
SpeechCategoryEvent read_speech(const BusMessage& msg);

nlohmann::json state_update_payload(int robot_id, const MentalityState& previous,
                                    const MentalityState& state, const StateDelta& delta);
MentalityState read_state_update(const BusMessage& msg);

/// trial_index < 0 means "not part of an evaluation session".
nlohmann::json pose_command_payload(int robot_id, const kinematics::ExpressionMovement& movement,
                                    int trial_index = -1);
kinematics::ExpressionMovement read_pose_command(const BusMessage& msg);

nlohmann::json rating_payload(int trial_index, int grade);
nlohmann::json error_payload(std::string_view reason, const BusMessage* about = nullptr);

}  // namespace oculus::bus
