#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "eaas/entropy/quality.hpp"

namespace eaas::entropy {

// Parameters of the simulated QRNG. The defaults are the nominal reference
// hardware: 290 Mbps extracted rate, 0.93 bits/bit min-entropy.
struct DeviceModel {
  std::string device_id = "qrng0";
  double rate_bps = 290e6;
  double p_one = 0.5248583418115336;  // 2^-0.93
  std::uint64_t seed = 1;
  // Entropy claim the continuous health tests are calibrated against.
  double health_claim = 0.93;
  // Size of the rolling window the min-entropy estimate is computed over.
  std::size_t window_bits = 1'000'000;

  void validate() const;
  double true_min_entropy() const;  // -log2(max(p, 1-p))
};

// Modeled (not wall-clock) generation time: 8n / rate, in microseconds.
double generation_time_us(const DeviceModel& model, std::size_t n_bytes);

struct EntropyBlock {
  std::vector<std::uint8_t> data;
  std::string device_id;
  double t_gen_us = 0.0;
  QualityReport quality;
  std::uint64_t sequence = 0;
};

// Simulated bit source. Bits are i.i.d. Bernoulli(p_one) drawn from a
// seeded 64-bit Mersenne Twister, so the stream is a pure function of
// (seed, p_one, request history).
//
// The device keeps a rolling monitoring window of its most recent output.
// The window is primed at construction with unserved bits, so the first
// request already gets a full-size estimate. Each served block's report
// carries:
//   - min-entropy over the rolling window (n_bits = window size),
//   - Q-factor over the served block itself,
//   - health_ok from the continuous tests over the block's bits.
//
// generate() is serialized internally; one device is a single writer.
class EntropyDevice {
 public:
  explicit EntropyDevice(DeviceModel model);

  EntropyBlock generate(std::size_t n_bytes);

  const DeviceModel& model() const noexcept { return model_; }
  std::uint64_t blocks_generated() const;

 private:
  std::uint8_t next_byte();
  void push_window(std::span<const std::uint8_t> bytes);

  DeviceModel model_;
  std::uint64_t threshold_;  // a draw below this is a 1 bit
  bool always_one_;

  mutable std::mutex mu_;
  std::mt19937_64 engine_;
  HealthMonitor health_;
  std::vector<std::uint8_t> window_;
  std::size_t window_head_ = 0;
  std::uint64_t window_ones_ = 0;
  std::uint64_t sequence_ = 0;
};

}  // namespace eaas::entropy
