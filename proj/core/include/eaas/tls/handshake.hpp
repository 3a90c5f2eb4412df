#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eaas/net/network_model.hpp"
#include "eaas/net/socket.hpp"
#include "eaas/pki/certificate.hpp"
#include "eaas/pqc/catalog.hpp"
#include "eaas/protocol/client.hpp"
#include "eaas/tls/bandwidth.hpp"
#include "eaas/tls/messages.hpp"

namespace eaas::tls {

struct HandshakeRecord {
  std::string kem;
  std::string dsa;
  KeyExchangeMode mode = KeyExchangeMode::client_encapsulates;
  double t_handshake_ms = 0.0;
  double t_eaas_ms = 0.0;  // client and server entropy round trips
  double t_gen_us = 0.0;   // device generation time of every block used
  std::uint64_t bytes_c2s = 0;
  std::uint64_t bytes_s2c = 0;
  std::uint64_t packets_c2s = 0;
  std::uint64_t packets_s2c = 0;
  std::uint64_t random_bytes_consumed = 0;
  bool success = false;
  std::string error;  // empty on success

  // Measured flight sizes in send order; used for packet counts.
  std::vector<std::size_t> flights;

  bool operator==(const HandshakeRecord&) const = default;
};

// One JSON object, no trailing newline.
std::string to_json(const HandshakeRecord& record);
HandshakeRecord record_from_json(std::string_view text);

// A certificate chain, leaf first, with the leaf's signing key.
struct Identity {
  std::vector<pki::Certificate> chain;
  pki::Bytes sk;
};

// Deliberate protocol faults, for failure-path tests.
struct ServerFaults {
  bool corrupt_cert_verify = false;
  bool corrupt_certificate = false;
  bool corrupt_finished = false;
};

struct TlsServerConfig {
  net::Endpoint listen{"127.0.0.1", 0};
  std::string kem;
  Identity identity;
  // Trust anchor for client certificates. Mutual authentication requests
  // are refused when unset.
  std::optional<pki::Certificate> client_root;
  net::Endpoint eaas;
  int eaas_timeout_ms = 5000;
  int io_timeout_ms = 30000;
  ServerFaults faults;
};

struct TlsServerStats {
  std::uint64_t succeeded = 0;
  std::uint64_t failed = 0;
};

// Accepts one handshake per connection, each on its own thread. All key
// generation and encapsulation randomness is fetched from the EaaS.
class TlsServer {
 public:
  TlsServer(pqc::Catalog catalog, TlsServerConfig config);
  ~TlsServer();
  TlsServer(const TlsServer&) = delete;
  TlsServer& operator=(const TlsServer&) = delete;

  const net::Endpoint& endpoint() const noexcept;
  TlsServerStats stats() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ClientConfig {
  net::Endpoint server;
  std::string kem;
  KeyExchangeMode mode = KeyExchangeMode::client_encapsulates;
  // Client-server link. Applied per flight on the client side, in both
  // directions.
  net::NetworkModel net;
  pki::Certificate trusted_root;
  std::optional<Identity> identity;  // set to request mutual authentication
  int eaas_timeout_ms = 5000;
  int io_timeout_ms = 30000;
};

// Runs one handshake and returns its record; protocol failures yield
// success=false with `error` set rather than an exception. `sampler`
// supplies the client-server delays.
HandshakeRecord run_handshake(const pqc::Catalog& catalog, const ClientConfig& config,
                              protocol::EaasClient& entropy, net::DelaySampler& sampler);

// What predict_breakdown expects for a handshake between these identities.
HandshakeShape shape_for(const pqc::Catalog& catalog, const std::string& kem, KeyExchangeMode mode,
                         const std::vector<pki::Certificate>& server_chain,
                         const std::vector<pki::Certificate>* client_chain = nullptr);

}  // namespace eaas::tls
