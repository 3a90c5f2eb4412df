#include "eaas/tls/bandwidth.hpp"

#include "eaas/error.hpp"
#include "eaas/pki/certificate.hpp"

namespace eaas::tls {

std::size_t BandwidthBreakdown::c2s_total() const noexcept {
  return client_hello + key_exchange + client_certificate + client_cert_verify + client_finished;
}

std::size_t BandwidthBreakdown::s2c_total() const noexcept {
  return server_hello + certificate_msg + cert_verify + server_finished;
}

Direction flight_direction(std::size_t flight_index) noexcept {
  return flight_index % 2 == 0 ? Direction::client_to_server : Direction::server_to_client;
}

namespace {

std::size_t certificate_message_size(std::span<const std::size_t> chain) {
  std::size_t body = 1;
  for (auto c : chain) body += 3 + c;
  return kMessageHeader + body;
}

}  // namespace

BandwidthBreakdown predict_breakdown(const HandshakeShape& shape) {
  if (shape.kem == nullptr || shape.dsa == nullptr) {
    throw Error(Errc::invalid_argument, "handshake shape needs a KEM and a DSA");
  }
  if (shape.kem->kind() != pqc::Kind::kem || shape.dsa->kind() != pqc::Kind::dsa) {
    throw Error(Errc::invalid_argument, "profile kinds do not match their roles");
  }
  const bool mutual = !shape.client_chain.empty();
  if (mutual && shape.client_dsa == nullptr) {
    throw Error(Errc::invalid_argument, "mutual authentication needs a client DSA");
  }
  const auto pk = shape.kem->pk_size();
  const auto ct = shape.kem->ct_or_sig_size();
  const bool server_encaps = shape.mode == KeyExchangeMode::server_encapsulates;

  BandwidthBreakdown b;
  b.client_hello = kMessageHeader + kClientHelloFixed + shape.kem->name().size() + (server_encaps ? pk : 0);
  b.server_hello = kMessageHeader + kRandomSize + (server_encaps ? ct : pk);
  b.certificate_msg = certificate_message_size(shape.server_chain);
  b.cert_verify = kMessageHeader + shape.dsa->ct_or_sig_size();
  b.key_exchange = server_encaps ? 0 : kMessageHeader + ct;
  if (mutual) {
    b.client_certificate = certificate_message_size(shape.client_chain);
    b.client_cert_verify = kMessageHeader + shape.client_dsa->ct_or_sig_size();
  }
  b.client_finished = kMessageHeader + kFinishedSize;
  b.server_finished = kMessageHeader + kFinishedSize;

  b.flights = {
      b.client_hello,
      b.server_hello + b.certificate_msg + b.cert_verify,
      b.key_exchange + b.client_certificate + b.client_cert_verify + b.client_finished,
      b.server_finished,
  };
  return b;
}

std::vector<std::size_t> two_level_chain_sizes(const pqc::Scheme& dsa, const std::string& leaf_subject,
                                               const std::string& root_subject) {
  const auto meta_leaf = leaf_subject.size() + root_subject.size() + dsa.name().size();
  const auto meta_root = 2 * root_subject.size() + dsa.name().size();
  return {pki::encoded_certificate_size(dsa.pk_size(), dsa.ct_or_sig_size(), meta_leaf),
          pki::encoded_certificate_size(dsa.pk_size(), dsa.ct_or_sig_size(), meta_root)};
}

std::size_t count_segments(std::size_t flight_bytes, std::size_t mtu_payload) {
  if (mtu_payload < 256) throw Error(Errc::invalid_argument, "mtu_payload must be at least 256");
  return (flight_bytes + mtu_payload - 1) / mtu_payload;
}

SegmentCounts count_segments(std::span<const std::size_t> flights, std::size_t mtu_payload) {
  SegmentCounts out;
  for (std::size_t i = 0; i < flights.size(); ++i) {
    const auto n = count_segments(flights[i], mtu_payload);
    (flight_direction(i) == Direction::client_to_server ? out.c2s : out.s2c) += n;
  }
  return out;
}

}  // namespace eaas::tls
