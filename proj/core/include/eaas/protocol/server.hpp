#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "eaas/entropy/device.hpp"
#include "eaas/net/network_model.hpp"
#include "eaas/net/socket.hpp"

namespace eaas::protocol {

struct ServeConfig {
  double h_min = 0.9;
  net::Endpoint listen{"127.0.0.1", 0};
  // HTTP listener for GET /metrics; disabled when unset.
  std::optional<net::Endpoint> metrics_listen;
  // Emulated entropy-network link. Each request is delayed once inbound and
  // once outbound, so a round trip costs two one-way delays.
  net::NetworkModel link;
  std::uint64_t link_seed = 0x5eed;
  std::uint32_t max_request_bytes = 65536;
};

struct MetricsCounters {
  std::uint64_t requests_total = 0;
  std::uint64_t bytes_served_total = 0;
  std::uint64_t below_threshold_total = 0;
  std::uint64_t errors_total = 0;
  double min_entropy_last = 0.0;
  double q_factor_last = 0.0;
  double t_gen_us_last = 0.0;
};

// Running EaaS service. Destruction stops it and joins every worker.
class EaasServer {
 public:
  ~EaasServer();
  EaasServer(const EaasServer&) = delete;
  EaasServer& operator=(const EaasServer&) = delete;

  const net::Endpoint& endpoint() const noexcept;
  std::optional<net::Endpoint> metrics_endpoint() const;

  MetricsCounters counters() const;
  std::string metrics_snapshot() const;

  void stop();

 private:
  struct Impl;
  explicit EaasServer(std::unique_ptr<Impl> impl);
  friend std::unique_ptr<EaasServer> serve(ServeConfig, std::shared_ptr<entropy::EntropyDevice>);

  std::unique_ptr<Impl> impl_;
};

// Binds, starts accepting, and returns once the service is reachable.
std::unique_ptr<EaasServer> serve(ServeConfig config,
                                  std::shared_ptr<entropy::EntropyDevice> device);

// Renders counters as the text exposition served at /metrics.
std::string render_metrics(const MetricsCounters& counters);

}  // namespace eaas::protocol
