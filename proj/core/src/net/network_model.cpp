#include "eaas/net/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "eaas/error.hpp"

namespace eaas::net {

void NetworkModel::validate() const {
  if (!(one_way_delay_ms >= 0.0) || !(jitter_ms >= 0.0)) {
    throw Error(Errc::invalid_argument, "network delays must be nonnegative");
  }
  if (mtu_payload < 256) throw Error(Errc::invalid_argument, "mtu_payload must be at least 256");
}

DelaySampler::DelaySampler(NetworkModel model, std::uint64_t seed)
    : model_((model.validate(), model)), rng_(seed) {}

std::chrono::microseconds DelaySampler::next() {
  double ms = model_.one_way_delay_ms;
  if (model_.jitter_ms > 0.0) {
    std::uniform_real_distribution<double> jitter(-model_.jitter_ms, model_.jitter_ms);
    ms += jitter(rng_);
  }
  ms = std::max(ms, 0.0);
  return std::chrono::microseconds(static_cast<std::int64_t>(std::llround(ms * 1000.0)));
}

void sleep_for_delay(std::chrono::microseconds delay) {
  if (delay.count() <= 0) return;
  // sleep_for may return early on some kernels; spin the remainder.
  const auto until = std::chrono::steady_clock::now() + delay;
  std::this_thread::sleep_for(delay);
  while (std::chrono::steady_clock::now() < until) std::this_thread::yield();
}

void apply_delay(DelaySampler& sampler, const std::function<void()>& write) {
  sleep_for_delay(sampler.next());
  write();
}

}  // namespace eaas::net
