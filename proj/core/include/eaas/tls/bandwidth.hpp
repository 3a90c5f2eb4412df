#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eaas/pqc/catalog.hpp"
#include "eaas/tls/messages.hpp"

namespace eaas::tls {

enum class Direction { client_to_server, server_to_client };

// Wire size of every handshake message, framing included. Messages absent
// in a given mode are zero.
struct BandwidthBreakdown {
  std::size_t client_hello = 0;
  std::size_t server_hello = 0;
  std::size_t certificate_msg = 0;
  std::size_t cert_verify = 0;
  std::size_t key_exchange = 0;
  std::size_t client_certificate = 0;  // mutual authentication only
  std::size_t client_cert_verify = 0;  // mutual authentication only
  std::size_t client_finished = 0;
  std::size_t server_finished = 0;

  // Flight sizes in send order: c2s, s2c, c2s, s2c.
  std::vector<std::size_t> flights;

  std::size_t c2s_total() const noexcept;
  std::size_t s2c_total() const noexcept;
  std::size_t total() const noexcept { return c2s_total() + s2c_total(); }
};

Direction flight_direction(std::size_t flight_index) noexcept;

struct HandshakeShape {
  const pqc::Scheme* kem = nullptr;
  const pqc::Scheme* dsa = nullptr;  // server signing algorithm
  KeyExchangeMode mode = KeyExchangeMode::client_encapsulates;
  std::vector<std::size_t> server_chain;  // encoded certificate sizes, leaf first
  std::vector<std::size_t> client_chain;  // empty unless mutual authentication
  const pqc::Scheme* client_dsa = nullptr;
};

BandwidthBreakdown predict_breakdown(const HandshakeShape& shape);

// Convenience: sizes of a two-level chain (leaf + self-signed root) under
// `dsa`, with the given subject names.
std::vector<std::size_t> two_level_chain_sizes(const pqc::Scheme& dsa, const std::string& leaf_subject,
                                               const std::string& root_subject);

// ceil(flight_bytes / mtu_payload).
std::size_t count_segments(std::size_t flight_bytes, std::size_t mtu_payload);

struct SegmentCounts {
  std::size_t c2s = 0;
  std::size_t s2c = 0;
};
SegmentCounts count_segments(std::span<const std::size_t> flights, std::size_t mtu_payload);

}  // namespace eaas::tls
