#include "eaas/protocol/frame.hpp"

#include <json.hpp>

#include "eaas/error.hpp"
#include "eaas/protocol/base64.hpp"

namespace eaas::protocol {

using nlohmann::json;

std::string_view to_string(ResponseStatus status) noexcept {
  switch (status) {
    case ResponseStatus::ok: return "ok";
    case ResponseStatus::below_threshold: return "below_threshold";
    case ResponseStatus::error: return "error";
  }
  return "error";
}

namespace {

ResponseStatus parse_status(const std::string& s) {
  if (s == "ok") return ResponseStatus::ok;
  if (s == "below_threshold") return ResponseStatus::below_threshold;
  if (s == "error") return ResponseStatus::error;
  throw Error(Errc::malformed_frame, "unknown status '" + s + "'");
}

json to_json(const Message& message) {
  if (const auto* req = std::get_if<EntropyRequest>(&message)) {
    json j = {{"type", "request"}, {"req_id", req->req_id}, {"n", req->n_bytes}};
    if (req->deadline_ms) j["deadline_ms"] = *req->deadline_ms;
    return j;
  }
  const auto& resp = std::get<EntropyResponse>(message);
  json j = {
      {"type", "response"},
      {"req_id", resp.req_id},
      {"data", base64_encode(resp.data)},
      {"quality",
       {{"min_entropy", resp.quality.min_entropy_per_bit},
        {"q_factor", resp.quality.q_factor},
        {"health_ok", resp.quality.health_ok},
        {"n_bits", resp.quality.n_bits},
        {"low_confidence", resp.quality.low_confidence}}},
      {"t_gen_us", resp.t_gen_us},
      {"device_id", resp.device_id},
      {"status", to_string(resp.status)},
  };
  if (!resp.error.empty()) j["error"] = resp.error;
  return j;
}

Message from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "request") {
    EntropyRequest req;
    req.req_id = j.at("req_id").get<std::string>();
    req.n_bytes = j.at("n").get<std::uint32_t>();
    if (j.contains("deadline_ms")) req.deadline_ms = j.at("deadline_ms").get<std::uint32_t>();
    return req;
  }
  if (type == "response") {
    EntropyResponse resp;
    resp.req_id = j.at("req_id").get<std::string>();
    resp.data = base64_decode(j.at("data").get<std::string>());
    const auto& q = j.at("quality");
    resp.quality.min_entropy_per_bit = q.at("min_entropy").get<double>();
    resp.quality.q_factor = q.at("q_factor").get<double>();
    resp.quality.health_ok = q.at("health_ok").get<bool>();
    resp.quality.n_bits = q.at("n_bits").get<std::uint64_t>();
    resp.quality.low_confidence = q.value("low_confidence", false);
    resp.t_gen_us = j.at("t_gen_us").get<double>();
    resp.device_id = j.at("device_id").get<std::string>();
    resp.status = parse_status(j.at("status").get<std::string>());
    resp.error = j.value("error", std::string{});
    return resp;
  }
  throw Error(Errc::malformed_frame, "unknown message type '" + type + "'");
}

std::uint32_t read_be32(std::span<const std::uint8_t> p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Message& message) {
  const std::string body = to_json(message).dump();
  if (body.size() > kMaxFrameBody) {
    throw Error(Errc::frame_too_large, std::to_string(body.size()) + " byte body");
  }
  const auto n = static_cast<std::uint32_t>(body.size());
  std::vector<std::uint8_t> frame;
  frame.reserve(4 + body.size());
  frame.push_back(static_cast<std::uint8_t>(n >> 24));
  frame.push_back(static_cast<std::uint8_t>(n >> 16));
  frame.push_back(static_cast<std::uint8_t>(n >> 8));
  frame.push_back(static_cast<std::uint8_t>(n));
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

Message decode_body(std::span<const std::uint8_t> body) {
  try {
    return from_json(json::parse(body.begin(), body.end()));
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_frame, e.what());
  }
}

Message decode_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() < 4) throw Error(Errc::incomplete_frame, "missing length prefix");
  const std::size_t n = read_be32(frame);
  if (n > kMaxFrameBody) throw Error(Errc::frame_too_large, std::to_string(n) + " byte body");
  if (frame.size() < 4 + n) {
    throw Error(Errc::incomplete_frame,
                "expected " + std::to_string(n) + " body bytes, got " + std::to_string(frame.size() - 4));
  }
  if (frame.size() > 4 + n) throw Error(Errc::malformed_frame, "trailing bytes after frame");
  return decode_body(frame.subspan(4, n));
}

void write_frame(net::Socket& socket, const Message& message) {
  socket.write_all(encode_frame(message));
}

Message read_frame(net::Socket& socket, net::Deadline deadline) {
  std::uint8_t prefix[4];
  socket.read_exact(prefix, deadline);
  const std::size_t n = read_be32(prefix);
  if (n > kMaxFrameBody) throw Error(Errc::frame_too_large, std::to_string(n) + " byte body");
  std::vector<std::uint8_t> body(n);
  socket.read_exact(body, deadline);
  return decode_body(body);
}

}  // namespace eaas::protocol
