#include "eaas/net/tcp_service.hpp"

#include "eaas/error.hpp"

namespace eaas::net {

TcpService::TcpService(const Endpoint& listen, Handler handler)
    : listener_(listen), handler_(std::move(handler)) {
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpService::~TcpService() { stop(); }

void TcpService::reap_finished() {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (it->done.load()) {
      it->worker.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void TcpService::accept_loop() {
  while (!stopping_.load()) {
    Socket sock = listener_.accept();
    if (!sock.valid()) break;
    std::lock_guard lock(mu_);
    if (stopping_.load()) break;
    reap_finished();
    auto& conn = connections_.emplace_back();
    conn.socket = std::move(sock);
    const auto index = accepted_++;
    conn.worker = std::thread([this, c = &conn, index] {
      try {
        handler_(c->socket, index);
      } catch (const std::exception&) {
        // A failing connection never takes the service down.
      }
      c->socket.shutdown();  // closed when reaped, after join
      c->done.store(true);
    });
  }
}

void TcpService::stop() {
  if (stopping_.exchange(true)) return;
  listener_.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  std::lock_guard lock(mu_);
  for (auto& c : connections_) c.socket.shutdown();
  for (auto& c : connections_) c.worker.join();
  connections_.clear();
}

}  // namespace eaas::net
