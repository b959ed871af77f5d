#include "ringbot/transport.hpp"

#include <fcntl.h>
#include <poll.h>
#include <pthread.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fstream>
#include <thread>

#include "ringbot/errors.hpp"

namespace ringbot::link {

void LineQueue::push(std::string line) {
  {
    std::lock_guard lock(mu_);
    lines_.push_back(std::move(line));
  }
  cv_.notify_one();
}

std::optional<std::string> LineQueue::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout, [this] { return !lines_.empty(); })) {
    return std::nullopt;
  }
  std::string line = std::move(lines_.front());
  lines_.pop_front();
  return line;
}

std::size_t LineQueue::size() const {
  std::lock_guard lock(mu_);
  return lines_.size();
}

void MemoryTransport::send(std::string_view line) {
  if (!line.empty() && line.back() == '\n') {
    line.remove_suffix(1);
  }
  outbox_->push(std::string(line));
}

std::optional<std::string> MemoryTransport::receive(std::chrono::milliseconds timeout) {
  return inbox_->pop(timeout);
}

std::pair<std::unique_ptr<MemoryTransport>, std::unique_ptr<MemoryTransport>> make_memory_pair() {
  auto a_to_b = std::make_shared<LineQueue>();
  auto b_to_a = std::make_shared<LineQueue>();
  return {std::make_unique<MemoryTransport>(b_to_a, a_to_b),
          std::make_unique<MemoryTransport>(a_to_b, b_to_a)};
}

// ---- file descriptors ------------------------------------------------------

FdTransport::FdTransport(int read_fd, int write_fd, bool owns_fds)
    : read_fd_(read_fd), write_fd_(write_fd), owns_(owns_fds) {}

FdTransport::~FdTransport() {
  if (owns_) {
    ::close(read_fd_);
    ::close(write_fd_);
  }
}

void FdTransport::send(std::string_view line) {
  std::string out(line);
  if (out.empty() || out.back() != '\n') {
    out.push_back('\n');
  }
  // A closed reader must surface as an error, not kill the process, so
  // SIGPIPE is held back on this thread for the duration of the write.
  sigset_t pipe_set;
  sigset_t old_set;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &pipe_set, &old_set);
  std::size_t done = 0;
  int err = 0;
  while (done < out.size()) {
    const ssize_t n = ::write(write_fd_, out.data() + done, out.size() - done);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      err = errno;
      break;
    }
    done += static_cast<std::size_t>(n);
  }
  if (err == EPIPE && !sigismember(&old_set, SIGPIPE)) {
    const timespec zero{0, 0};
    sigtimedwait(&pipe_set, nullptr, &zero);
  }
  pthread_sigmask(SIG_SETMASK, &old_set, nullptr);
  if (err != 0) {
    throw TransportError(std::string("write failed: ") + std::strerror(err));
  }
}

std::optional<std::string> FdTransport::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    pollfd pfd{read_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::max<std::int64_t>(0, left.count())));
    if (rc < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw TransportError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) {
      return std::nullopt;
    }
    char chunk[4096];
    const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) {
        continue;
      }
      throw TransportError(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      throw TransportError("peer closed the stream");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::unique_ptr<FdTransport> make_stdio_transport() {
  return std::make_unique<FdTransport>(STDIN_FILENO, STDOUT_FILENO, false);
}

std::pair<std::unique_ptr<FdTransport>, std::unique_ptr<FdTransport>> make_pipe_pair() {
  int a_to_b[2];
  int b_to_a[2];
  if (::pipe(a_to_b) != 0) {
    throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
  }
  if (::pipe(b_to_a) != 0) {
    ::close(a_to_b[0]);
    ::close(a_to_b[1]);
    throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
  }
  return {std::make_unique<FdTransport>(b_to_a[0], a_to_b[1], true),
          std::make_unique<FdTransport>(a_to_b[0], b_to_a[1], true)};
}

// ---- files -----------------------------------------------------------------

FileTransport::FileTransport(std::filesystem::path outbound, std::filesystem::path inbound,
                             std::chrono::microseconds poll_interval)
    : outbound_(std::move(outbound)), inbound_(std::move(inbound)), poll_(poll_interval) {}

void FileTransport::send(std::string_view line) {
  std::ofstream out(outbound_, std::ios::app | std::ios::binary);
  if (!out) {
    throw TransportError("cannot append to " + outbound_.string());
  }
  out << line;
  if (line.empty() || line.back() != '\n') {
    out << '\n';
  }
  out.flush();
  if (!out) {
    throw TransportError("write failed on " + outbound_.string());
  }
}

std::optional<std::string> FileTransport::try_read_line() {
  std::ifstream in(inbound_, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  in.seekg(static_cast<std::streamoff>(offset_));
  std::string line;
  if (!std::getline(in, line) || in.eof()) {
    // No complete line yet.
    return std::nullopt;
  }
  offset_ += line.size() + 1;
  return line;
}

std::optional<std::string> FileTransport::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto line = try_read_line()) {
      return line;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      return std::nullopt;
    }
    std::this_thread::sleep_for(poll_);
  }
}

// ---- fault injection ---------------------------------------------------------

void DuplicatingTransport::send(std::string_view line) {
  for (int i = 0; i < copies_; ++i) {
    inner_.send(line);
  }
}

void DroppingTransport::send(std::string_view line) {
  if (!drop_(count_++)) {
    inner_.send(line);
  }
}

}  // namespace ringbot::link
