#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eaas/entropy/quality.hpp"
#include "eaas/net/socket.hpp"

namespace eaas::protocol {

// Server-enforced cap on a single request.
inline constexpr std::uint32_t kMaxRequestBytes = 65536;
// Upper bound on the JSON body of any frame.
inline constexpr std::size_t kMaxFrameBody = std::size_t{1} << 24;

struct EntropyRequest {
  std::string req_id;
  std::uint32_t n_bytes = 0;
  std::optional<std::uint32_t> deadline_ms;

  bool operator==(const EntropyRequest&) const = default;
};

enum class ResponseStatus { ok, below_threshold, error };

std::string_view to_string(ResponseStatus status) noexcept;

struct EntropyResponse {
  std::string req_id;
  std::vector<std::uint8_t> data;
  entropy::QualityReport quality;
  double t_gen_us = 0.0;
  std::string device_id;
  ResponseStatus status = ResponseStatus::ok;
  std::string error;  // set only when status == error

  bool operator==(const EntropyResponse&) const = default;
};

using Message = std::variant<EntropyRequest, EntropyResponse>;

// Frame layout: 4-byte big-endian body length N, then N bytes of UTF-8 JSON.
std::vector<std::uint8_t> encode_frame(const Message& message);

// Decodes exactly one frame occupying the whole buffer.
Message decode_frame(std::span<const std::uint8_t> frame);
Message decode_body(std::span<const std::uint8_t> body);

void write_frame(net::Socket& socket, const Message& message);
Message read_frame(net::Socket& socket, net::Deadline deadline = std::nullopt);

}  // namespace eaas::protocol
