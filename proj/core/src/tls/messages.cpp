#include "eaas/tls/messages.hpp"

#include <string>

#include "eaas/error.hpp"

namespace eaas::tls {

std::string_view to_string(MessageType type) noexcept {
  switch (type) {
    case MessageType::client_hello: return "client_hello";
    case MessageType::server_hello: return "server_hello";
    case MessageType::certificate: return "certificate";
    case MessageType::certificate_verify: return "certificate_verify";
    case MessageType::key_exchange: return "key_exchange";
    case MessageType::finished: return "finished";
    case MessageType::alert: return "alert";
    case MessageType::canary: return "canary";
    case MessageType::server_log: return "server_log";
  }
  return "unknown";
}

std::string_view to_string(KeyExchangeMode mode) noexcept {
  return mode == KeyExchangeMode::client_encapsulates ? "client_encapsulates" : "server_encapsulates";
}

KeyExchangeMode parse_mode(std::string_view text) {
  if (text == "client_encapsulates" || text == "client") return KeyExchangeMode::client_encapsulates;
  if (text == "server_encapsulates" || text == "server") return KeyExchangeMode::server_encapsulates;
  throw Error(Errc::invalid_argument, "unknown key exchange mode '" + std::string(text) + "'");
}

Bytes frame_message(MessageType type, ByteView body) {
  if (body.size() > kMaxMessageBody) throw Error(Errc::invalid_argument, "handshake message too large");
  Bytes out;
  out.reserve(kMessageHeader + body.size());
  out.push_back(static_cast<std::uint8_t>(type));
  out.push_back(static_cast<std::uint8_t>(body.size() >> 16));
  out.push_back(static_cast<std::uint8_t>(body.size() >> 8));
  out.push_back(static_cast<std::uint8_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Bytes encode_certificate_list(std::span<const Bytes> encoded_certs) {
  if (encoded_certs.size() > 255) throw Error(Errc::invalid_argument, "certificate chain too long");
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(encoded_certs.size()));
  for (const auto& c : encoded_certs) {
    if (c.size() > kMaxMessageBody) throw Error(Errc::invalid_argument, "certificate too large");
    out.push_back(static_cast<std::uint8_t>(c.size() >> 16));
    out.push_back(static_cast<std::uint8_t>(c.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(c.size()));
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::vector<Bytes> decode_certificate_list(ByteView body) {
  if (body.empty()) throw Error(Errc::chain_invalid, "empty certificate message");
  std::vector<Bytes> out;
  const std::size_t count = body[0];
  std::size_t pos = 1;
  for (std::size_t i = 0; i < count; ++i) {
    if (body.size() - pos < 3) throw Error(Errc::chain_invalid, "truncated certificate list");
    const std::size_t len = (std::size_t{body[pos]} << 16) | (std::size_t{body[pos + 1]} << 8) | body[pos + 2];
    pos += 3;
    if (body.size() - pos < len) throw Error(Errc::chain_invalid, "truncated certificate");
    out.emplace_back(body.begin() + static_cast<std::ptrdiff_t>(pos),
                     body.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  if (pos != body.size()) throw Error(Errc::chain_invalid, "trailing bytes in certificate list");
  return out;
}

Bytes Transcript::hash() const { return pqc::xof({pqc::as_bytes("transcript"), bytes_}, 32); }

}  // namespace eaas::tls
