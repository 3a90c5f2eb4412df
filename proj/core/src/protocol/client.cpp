#include "eaas/protocol/client.hpp"

#include <string>

#include "eaas/error.hpp"
#include "eaas/protocol/frame.hpp"

namespace eaas::protocol {

EaasClient::EaasClient(net::Endpoint server, int default_timeout_ms)
    : server_(std::move(server)), default_timeout_ms_(default_timeout_ms) {}

FetchResult EaasClient::fetch(std::uint32_t n_bytes, std::optional<int> timeout_ms) {
  const int timeout = timeout_ms.value_or(default_timeout_ms_);
  if (n_bytes == 0) throw Error(Errc::invalid_argument, "n_bytes must be at least 1");

  const auto count_failure = [this] { ++stats_.failures; };
  try {
    if (!socket_.valid()) socket_ = net::connect_tcp(server_);

    EntropyRequest req;
    req.req_id = "r" + std::to_string(next_id_++);
    req.n_bytes = n_bytes;
    req.deadline_ms = static_cast<std::uint32_t>(timeout);

    const auto start = net::Clock::now();
    const auto deadline = start + std::chrono::milliseconds(timeout);
    write_frame(socket_, req);
    Message msg = read_frame(socket_, deadline);
    const auto stop = net::Clock::now();

    auto* resp = std::get_if<EntropyResponse>(&msg);
    if (resp == nullptr || resp->req_id != req.req_id) {
      socket_.close();
      throw Error(Errc::transport, "unexpected reply on entropy channel");
    }
    if (resp->status == ResponseStatus::below_threshold) {
      throw Error(Errc::entropy_unavailable, "served block below quality threshold");
    }
    if (resp->status == ResponseStatus::error) {
      throw Error(Errc::entropy_unavailable, "server error: " + resp->error);
    }
    if (resp->data.size() != n_bytes) {
      throw Error(Errc::entropy_unavailable, "short entropy response");
    }

    FetchResult result;
    result.data = std::move(resp->data);
    result.t_eaas_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    result.t_gen_us = resp->t_gen_us;
    result.quality = resp->quality;
    stats_.t_eaas_ms.push_back(result.t_eaas_ms);
    stats_.bytes_served += n_bytes;
    return result;
  } catch (const Error& e) {
    count_failure();
    if (e.code() == Errc::timeout) {
      socket_.close();
      throw Error(Errc::entropy_unavailable, "entropy request timed out after " +
                                                 std::to_string(timeout) + " ms");
    }
    if (e.code() == Errc::transport || e.code() == Errc::malformed_frame ||
        e.code() == Errc::frame_too_large) {
      socket_.close();
      throw Error(Errc::transport, e.what());
    }
    throw;
  }
}

std::vector<std::uint8_t> EaasEntropySource::do_draw(std::size_t n) {
  if (n > kMaxRequestBytes) {
    throw Error(Errc::cap_exceeded, std::to_string(n) + " bytes in one draw");
  }
  auto result = client_.fetch(static_cast<std::uint32_t>(n), timeout_ms_);
  t_eaas_ms_ += result.t_eaas_ms;
  t_gen_us_ += result.t_gen_us;
  return std::move(result.data);
}

}  // namespace eaas::protocol
