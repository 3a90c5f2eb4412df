#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "eaas/pqc/xof.hpp"

namespace eaas::tls {

using pqc::Bytes;
using pqc::ByteView;

// Every handshake message is framed as a 1-byte type and a 3-byte
// big-endian body length.
inline constexpr std::size_t kMessageHeader = 4;
inline constexpr std::size_t kRandomSize = 32;
inline constexpr std::size_t kFinishedSize = 32;
inline constexpr std::size_t kMaxMessageBody = (std::size_t{1} << 24) - 1;

enum class MessageType : std::uint8_t {
  client_hello = 1,
  server_hello = 2,
  certificate = 11,
  certificate_verify = 15,
  key_exchange = 16,
  finished = 20,
  alert = 21,
  canary = 30,
  server_log = 31,
};

std::string_view to_string(MessageType type) noexcept;

enum class KeyExchangeMode : std::uint8_t {
  client_encapsulates = 0,  // server sends a KEM public key, client returns a ciphertext
  server_encapsulates = 1,  // TLS 1.3 style: client key share first, server encapsulates
};

std::string_view to_string(KeyExchangeMode mode) noexcept;
KeyExchangeMode parse_mode(std::string_view text);

// Body of a ClientHello: random | u8 mode | u8 flags | u8 len + kem | key share.
inline constexpr std::uint8_t kFlagMutualAuth = 0x01;
inline constexpr std::size_t kClientHelloFixed = kRandomSize + 3;

Bytes frame_message(MessageType type, ByteView body);

struct ParsedMessage {
  MessageType type;
  Bytes body;
  std::size_t wire_size() const noexcept { return kMessageHeader + body.size(); }
};

// Certificate message body: u8 count, then u24 length + encoding per cert.
Bytes encode_certificate_list(std::span<const Bytes> encoded_certs);
std::vector<Bytes> decode_certificate_list(ByteView body);

// Running transcript; hash() covers every message appended so far,
// headers included.
class Transcript {
 public:
  void append(ByteView wire_message) { bytes_.insert(bytes_.end(), wire_message.begin(), wire_message.end()); }
  Bytes hash() const;

 private:
  Bytes bytes_;
};

}  // namespace eaas::tls
