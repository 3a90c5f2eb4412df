#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace eaas::net {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // Accepts "host:port"; a bare ":port" or "port" binds to 127.0.0.1.
  static Endpoint parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const Endpoint&) const = default;
};

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

Deadline deadline_after(std::optional<std::chrono::milliseconds> timeout);

// Move-only owner of a connected TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) noexcept : fd_(fd) {}
  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  bool valid() const noexcept { return fd_ >= 0; }
  int fd() const noexcept { return fd_; }

  void write_all(std::span<const std::uint8_t> data);
  // Fills `out` completely or throws (timeout, transport).
  void read_exact(std::span<std::uint8_t> out, Deadline deadline = std::nullopt);

  // Wakes any thread blocked on this socket; the fd stays owned.
  void shutdown() noexcept;
  void close() noexcept;

 private:
  int fd_ = -1;
};

Socket connect_tcp(const Endpoint& endpoint);

class Listener {
 public:
  // Port 0 picks an ephemeral port; query it with endpoint().
  explicit Listener(const Endpoint& endpoint);
  Listener(Listener&&) noexcept = default;
  Listener& operator=(Listener&&) noexcept = default;

  const Endpoint& endpoint() const noexcept { return bound_; }

  // Returns an invalid socket once shutdown() has been called.
  Socket accept();
  void shutdown() noexcept;

 private:
  Socket socket_;
  Endpoint bound_;
};

}  // namespace eaas::net
