#pragma once

// Brain <-> coprocessor link. Wire format, one ASCII line per packet:
//
//   B <x> <z> <heading> <game_time> <iter>\n
//   J <velocity> <rotation> <iter>\n
//
// Numbers are shortest round-trip decimals, single spaces, LF terminator.
// Each side stamps its own outbound packets with a counter starting at 0 and
// drops inbound packets whose counter is not above the last one it accepted.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "ringbot/transport.hpp"

namespace ringbot::link {

struct BrainPacket {
  double x = 0.0;  // alliance-frame meters
  double z = 0.0;
  double heading = 0.0;    // radians
  double game_time = 0.0;  // seconds
  std::uint64_t iter = 0;

  friend bool operator==(const BrainPacket&, const BrainPacket&) = default;
};

struct JetsonPacket {
  double velocity = 0.0;  // [-1, 1]
  double rotation = 0.0;  // [-1, 1]
  std::uint64_t iter = 0;

  friend bool operator==(const JetsonPacket&, const JetsonPacket&) = default;
};

/// Throws std::invalid_argument on non-finite fields.
std::string encode_brain(const BrainPacket& p);
/// Throws MalformedPacket.
BrainPacket decode_brain(std::string_view line);

/// Throws std::invalid_argument on non-finite or out-of-range values.
std::string encode_jetson(const JetsonPacket& p);
JetsonPacket decode_jetson(std::string_view line);

enum class Mode { AwaitingMessage, Processing, Sending };

const char* to_string(Mode m);

struct EndpointState {
  Mode mode = Mode::AwaitingMessage;
  std::optional<std::uint64_t> last_seen_iter;
  std::optional<std::uint64_t> last_sent_iter;
};

enum class Inbound { Fresh, Duplicate };

/// Repeats and stale (lower) counters are duplicates; fresh ones advance
/// last_seen_iter.
Inbound accept_inbound(EndpointState& state, std::uint64_t iter);

struct EndpointStats {
  std::uint64_t sent = 0;
  std::uint64_t fresh = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t malformed = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t handler_failures = 0;
};

inline constexpr std::chrono::milliseconds kDefaultTimeout{250};

struct Telemetry {
  double x = 0.0;
  double z = 0.0;
  double heading = 0.0;
  double game_time = 0.0;
};

struct Command {
  double velocity = 0.0;
  double rotation = 0.0;
};

/// Robot-side endpoint. Starts in Sending; each step() performs one transition.
class BrainEndpoint {
 public:
  using TelemetrySource = std::function<Telemetry()>;
  using MotorSink = std::function<void(const JetsonPacket&)>;

  BrainEndpoint(Transport& transport, TelemetrySource source, MotorSink sink,
                std::chrono::milliseconds timeout = kDefaultTimeout);

  Mode step();

  /// Drives one full request/response cycle. Returns the response handed to
  /// the motor sink, or nullopt once `max_timeouts` consecutive waits expire
  /// (the endpoint stays in AwaitingMessage).
  std::optional<JetsonPacket> exchange(int max_timeouts = 1,
                                       const std::function<void()>& after_send = {});

  const EndpointState& state() const { return state_; }
  const EndpointStats& stats() const { return stats_; }

 private:
  Transport& transport_;
  TelemetrySource source_;
  MotorSink sink_;
  std::chrono::milliseconds timeout_;
  EndpointState state_{Mode::Sending, std::nullopt, std::nullopt};
  EndpointStats stats_;
  std::optional<JetsonPacket> pending_;
};

/// Coprocessor-side endpoint. Starts in AwaitingMessage.
class JetsonEndpoint {
 public:
  /// Throwing from the handler suppresses the response for that packet.
  using Handler = std::function<Command(const BrainPacket&)>;

  JetsonEndpoint(Transport& transport, Handler handler,
                 std::chrono::milliseconds timeout = kDefaultTimeout);

  Mode step();

  /// Steps until one response has been sent or a wait times out.
  bool serve_one();

  const EndpointState& state() const { return state_; }
  const EndpointStats& stats() const { return stats_; }

 private:
  Transport& transport_;
  Handler handler_;
  std::chrono::milliseconds timeout_;
  EndpointState state_;
  EndpointStats stats_;
  std::optional<BrainPacket> pending_;
  std::optional<Command> response_;
};

}  // namespace ringbot::link
