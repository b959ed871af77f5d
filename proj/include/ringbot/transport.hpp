#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace ringbot::link {

/// Duplex line transport. Lines are passed without their terminator.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(std::string_view line) = 0;
  /// nullopt when nothing arrives within `timeout`.
  virtual std::optional<std::string> receive(std::chrono::milliseconds timeout) = 0;
};

/// One direction of an in-memory link.
class LineQueue {
 public:
  void push(std::string line);
  std::optional<std::string> pop(std::chrono::milliseconds timeout);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> lines_;
};

class MemoryTransport final : public Transport {
 public:
  MemoryTransport(std::shared_ptr<LineQueue> inbox, std::shared_ptr<LineQueue> outbox)
      : inbox_(std::move(inbox)), outbox_(std::move(outbox)) {}

  void send(std::string_view line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;

 private:
  std::shared_ptr<LineQueue> inbox_;
  std::shared_ptr<LineQueue> outbox_;
};

/// Two connected ends: what one sends, the other receives.
std::pair<std::unique_ptr<MemoryTransport>, std::unique_ptr<MemoryTransport>> make_memory_pair();

/// Line transport over POSIX file descriptors (pipes, or stdin/stdout).
class FdTransport final : public Transport {
 public:
  FdTransport(int read_fd, int write_fd, bool owns_fds = false);
  ~FdTransport() override;
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void send(std::string_view line) override;
  /// Throws TransportError once the read side reports end of stream.
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;

 private:
  int read_fd_;
  int write_fd_;
  bool owns_;
  std::string buffer_;
};

/// Bridge over the process's standard input and output.
std::unique_ptr<FdTransport> make_stdio_transport();

/// Two FdTransports joined by a pair of pipes.
std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>> make_pipe_pair();

/// Appends outbound lines to one file and tails another, remembering the byte
/// offset of the last complete line read.
class FileTransport final : public Transport {
 public:
  FileTransport(std::filesystem::path outbound, std::filesystem::path inbound,
                std::chrono::microseconds poll_interval = std::chrono::microseconds(200));

  void send(std::string_view line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;

  std::uint64_t read_offset() const { return offset_; }

 private:
  std::optional<std::string> try_read_line();

  std::filesystem::path outbound_;
  std::filesystem::path inbound_;
  std::chrono::microseconds poll_;
  std::uint64_t offset_ = 0;
};

/// Fault injection: every sent line is delivered `copies` times.
class DuplicatingTransport final : public Transport {
 public:
  DuplicatingTransport(Transport& inner, int copies) : inner_(inner), copies_(copies) {}
  void send(std::string_view line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override {
    return inner_.receive(timeout);
  }

 private:
  Transport& inner_;
  int copies_;
};

/// Fault injection: silently drops the sends whose 0-based index satisfies
/// `drop(index)`.
class DroppingTransport final : public Transport {
 public:
  template <typename Pred>
  DroppingTransport(Transport& inner, Pred drop) : inner_(inner), drop_(std::move(drop)) {}
  void send(std::string_view line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override {
    return inner_.receive(timeout);
  }

 private:
  Transport& inner_;
  std::function<bool(std::uint64_t)> drop_;
  std::uint64_t count_ = 0;
};

}  // namespace ringbot::link
