#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace eaas::net {

// One-way link model applied per flight (not per byte).
struct NetworkModel {
  double one_way_delay_ms = 0.0;
  double jitter_ms = 0.0;  // uniform in [-jitter, +jitter], clamped at zero total
  std::size_t mtu_payload = 1448;

  void validate() const;
  bool operator==(const NetworkModel&) const = default;
};

// Samples per-flight delays for one link. Not thread-safe; one per endpoint.
class DelaySampler {
 public:
  DelaySampler(NetworkModel model, std::uint64_t seed);

  std::chrono::microseconds next();
  const NetworkModel& model() const noexcept { return model_; }

 private:
  NetworkModel model_;
  std::mt19937_64 rng_;
};

// Postpones `write` by one sampled flight delay, then runs it.
void apply_delay(DelaySampler& sampler, const std::function<void()>& write);

void sleep_for_delay(std::chrono::microseconds delay);

}  // namespace eaas::net
