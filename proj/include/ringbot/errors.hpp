#pragma once

#include <stdexcept>
#include <string>

namespace ringbot {

/// Bad or inconsistent configuration (sizes, counts, file contents).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidIntrinsics : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MalformedPacket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by a policy that could not produce an action; aborts the episode.
class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringbot
