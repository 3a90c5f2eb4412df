#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "eaas/entropy/quality.hpp"
#include "eaas/net/socket.hpp"
#include "eaas/pqc/entropy_source.hpp"

namespace eaas::protocol {

struct FetchResult {
  std::vector<std::uint8_t> data;
  double t_eaas_ms = 0.0;  // measured round trip, request write to response decode
  double t_gen_us = 0.0;   // device generation time reported by the server
  entropy::QualityReport quality;
};

struct EaasClientStats {
  std::vector<double> t_eaas_ms;
  std::uint64_t bytes_served = 0;
  std::uint64_t failures = 0;
};

// One handle per consumer; not thread-safe. Connects lazily and reconnects
// after a timeout or transport failure, since a late response would
// otherwise desynchronize the stream.
class EaasClient {
 public:
  explicit EaasClient(net::Endpoint server, int default_timeout_ms = 5000);

  // Exactly n_bytes of entropy that passed the server's quality gate.
  // Throws entropy-unavailable on below_threshold, error status, or timeout;
  // transport on connection failure.
  FetchResult fetch(std::uint32_t n_bytes, std::optional<int> timeout_ms = std::nullopt);

  const EaasClientStats& stats() const noexcept { return stats_; }
  const net::Endpoint& server() const noexcept { return server_; }

 private:
  net::Endpoint server_;
  int default_timeout_ms_;
  net::Socket socket_;
  std::uint64_t next_id_ = 1;
  EaasClientStats stats_;
};

// Adapts a client to the pqc entropy interface and accumulates the timing
// a handshake record needs.
class EaasEntropySource final : public pqc::EntropySource {
 public:
  explicit EaasEntropySource(EaasClient& client, std::optional<int> timeout_ms = std::nullopt)
      : client_(client), timeout_ms_(timeout_ms) {}

  double total_t_eaas_ms() const noexcept { return t_eaas_ms_; }
  double total_t_gen_us() const noexcept { return t_gen_us_; }

 protected:
  std::vector<std::uint8_t> do_draw(std::size_t n) override;

 private:
  EaasClient& client_;
  std::optional<int> timeout_ms_;
  double t_eaas_ms_ = 0.0;
  double t_gen_us_ = 0.0;
};

}  // namespace eaas::protocol
