#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <list>
#include <mutex>
#include <thread>

#include "eaas/net/socket.hpp"

namespace eaas::net {

// Accept loop with one worker thread per connection. Finished workers are
// reaped on the next accept; stop() wakes and joins everything.
class TcpService {
 public:
  // The handler owns the connection for its lifetime; `index` counts
  // accepted connections from 0.
  using Handler = std::function<void(Socket& connection, std::uint64_t index)>;

  TcpService(const Endpoint& listen, Handler handler);
  ~TcpService();
  TcpService(const TcpService&) = delete;
  TcpService& operator=(const TcpService&) = delete;

  const Endpoint& endpoint() const noexcept { return listener_.endpoint(); }
  bool stopping() const noexcept { return stopping_.load(); }
  void stop();

 private:
  struct Connection {
    Socket socket;
    std::thread worker;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void reap_finished();

  Listener listener_;
  Handler handler_;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::list<Connection> connections_;
  std::uint64_t accepted_ = 0;
  std::thread acceptor_;
};

}  // namespace eaas::net
