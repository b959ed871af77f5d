#include "ringbot/link.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ringbot/errors.hpp"
#include "ringbot/format.hpp"

namespace ringbot::link {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  if (!line.empty() && line.back() == '\n') {
    line.remove_suffix(1);
  }
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

double field_double(std::string_view tok, const char* what) {
  const auto v = parse_double(tok);
  if (!v || !std::isfinite(*v)) {
    throw MalformedPacket(std::string("bad ") + what + ": '" + std::string(tok) + "'");
  }
  return *v;
}

std::uint64_t field_iter(std::string_view tok) {
  const auto v = parse_unsigned(tok);
  if (!v) {
    throw MalformedPacket("bad iter: '" + std::string(tok) + "'");
  }
  return *v;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " is not finite");
  }
}

void require_unit(double v, const char* what) {
  require_finite(v, what);
  if (v < -1.0 || v > 1.0) {
    throw std::invalid_argument(std::string(what) + " outside [-1, 1]");
  }
}

std::uint64_t next_iter(const EndpointState& s) {
  return s.last_sent_iter ? *s.last_sent_iter + 1 : 0;
}

}  // namespace

std::string encode_brain(const BrainPacket& p) {
  require_finite(p.x, "x");
  require_finite(p.z, "z");
  require_finite(p.heading, "heading");
  require_finite(p.game_time, "game_time");
  std::string s = "B ";
  s += format_double(p.x);
  s += ' ';
  s += format_double(p.z);
  s += ' ';
  s += format_double(p.heading);
  s += ' ';
  s += format_double(p.game_time);
  s += ' ';
  s += std::to_string(p.iter);
  s += '\n';
  return s;
}

BrainPacket decode_brain(std::string_view line) {
  const auto f = split_fields(line);
  if (f.empty() || f[0] != "B") {
    throw MalformedPacket("expected tag B");
  }
  if (f.size() != 6) {
    throw MalformedPacket("brain packet needs 5 fields, got " + std::to_string(f.size() - 1));
  }
  return BrainPacket{field_double(f[1], "x"), field_double(f[2], "z"),
                     field_double(f[3], "heading"), field_double(f[4], "game_time"),
                     field_iter(f[5])};
}

std::string encode_jetson(const JetsonPacket& p) {
  require_unit(p.velocity, "velocity");
  require_unit(p.rotation, "rotation");
  std::string s = "J ";
  s += format_double(p.velocity);
  s += ' ';
  s += format_double(p.rotation);
  s += ' ';
  s += std::to_string(p.iter);
  s += '\n';
  return s;
}

JetsonPacket decode_jetson(std::string_view line) {
  const auto f = split_fields(line);
  if (f.empty() || f[0] != "J") {
    throw MalformedPacket("expected tag J");
  }
  if (f.size() != 4) {
    throw MalformedPacket("jetson packet needs 3 fields, got " + std::to_string(f.size() - 1));
  }
  JetsonPacket p{field_double(f[1], "velocity"), field_double(f[2], "rotation"), field_iter(f[3])};
  if (std::abs(p.velocity) > 1.0 || std::abs(p.rotation) > 1.0) {
    throw MalformedPacket("command outside [-1, 1]");
  }
  return p;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::AwaitingMessage:
      return "AwaitingMessage";
    case Mode::Processing:
      return "Processing";
    case Mode::Sending:
      return "Sending";
  }
  return "?";
}

Inbound accept_inbound(EndpointState& state, std::uint64_t iter) {
  if (state.last_seen_iter && iter <= *state.last_seen_iter) {
    return Inbound::Duplicate;
  }
  state.last_seen_iter = iter;
  return Inbound::Fresh;
}

// ---- brain -----------------------------------------------------------------

BrainEndpoint::BrainEndpoint(Transport& transport, TelemetrySource source, MotorSink sink,
                             std::chrono::milliseconds timeout)
    : transport_(transport), source_(std::move(source)), sink_(std::move(sink)), timeout_(timeout) {}

Mode BrainEndpoint::step() {
  switch (state_.mode) {
    case Mode::Sending: {
      const Telemetry t = source_();
      const std::uint64_t iter = next_iter(state_);
      transport_.send(encode_brain({t.x, t.z, t.heading, t.game_time, iter}));
      state_.last_sent_iter = iter;
      ++stats_.sent;
      state_.mode = Mode::AwaitingMessage;
      break;
    }
    case Mode::AwaitingMessage: {
      const auto line = transport_.receive(timeout_);
      if (!line) {
        ++stats_.timeouts;
        break;
      }
      JetsonPacket p;
      try {
        p = decode_jetson(*line);
      } catch (const MalformedPacket&) {
        ++stats_.malformed;
        break;
      }
      if (accept_inbound(state_, p.iter) == Inbound::Duplicate) {
        ++stats_.duplicates;
        break;
      }
      ++stats_.fresh;
      pending_ = p;
      state_.mode = Mode::Processing;
      break;
    }
    case Mode::Processing:
      if (sink_) {
        sink_(*pending_);
      }
      state_.mode = Mode::Sending;
      break;
  }
  return state_.mode;
}

std::optional<JetsonPacket> BrainEndpoint::exchange(int max_timeouts,
                                                    const std::function<void()>& after_send) {
  if (state_.mode == Mode::Sending) {
    step();
    if (after_send) {
      after_send();
    }
  }
  int waited = 0;
  while (true) {
    const auto before = stats_.timeouts;
    const Mode m = step();
    if (m == Mode::Sending) {
      return pending_;
    }
    if (stats_.timeouts != before && ++waited >= max_timeouts) {
      return std::nullopt;
    }
  }
}

// ---- jetson ----------------------------------------------------------------

JetsonEndpoint::JetsonEndpoint(Transport& transport, Handler handler,
                               std::chrono::milliseconds timeout)
    : transport_(transport), handler_(std::move(handler)), timeout_(timeout) {}

Mode JetsonEndpoint::step() {
  switch (state_.mode) {
    case Mode::AwaitingMessage: {
      const auto line = transport_.receive(timeout_);
      if (!line) {
        ++stats_.timeouts;
        break;
      }
      BrainPacket p;
      try {
        p = decode_brain(*line);
      } catch (const MalformedPacket&) {
        ++stats_.malformed;
        break;
      }
      if (accept_inbound(state_, p.iter) == Inbound::Duplicate) {
        ++stats_.duplicates;
        break;
      }
      ++stats_.fresh;
      pending_ = p;
      state_.mode = Mode::Processing;
      break;
    }
    case Mode::Processing: {
      response_.reset();
      try {
        const Command c = handler_(*pending_);
        if (std::isfinite(c.velocity) && std::isfinite(c.rotation) && std::abs(c.velocity) <= 1.0 &&
            std::abs(c.rotation) <= 1.0) {
          response_ = c;
        }
      } catch (const std::exception&) {
      }
      if (!response_) {
        ++stats_.handler_failures;
        state_.mode = Mode::AwaitingMessage;
        break;
      }
      state_.mode = Mode::Sending;
      break;
    }
    case Mode::Sending: {
      const std::uint64_t iter = next_iter(state_);
      transport_.send(encode_jetson({response_->velocity, response_->rotation, iter}));
      state_.last_sent_iter = iter;
      ++stats_.sent;
      state_.mode = Mode::AwaitingMessage;
      break;
    }
  }
  return state_.mode;
}

bool JetsonEndpoint::serve_one() {
  const auto sent = stats_.sent;
  while (stats_.sent == sent) {
    const auto timeouts = stats_.timeouts;
    step();
    if (stats_.timeouts != timeouts) {
      return false;
    }
  }
  return true;
}

}  // namespace ringbot::link
