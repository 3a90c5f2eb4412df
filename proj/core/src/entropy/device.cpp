#include "eaas/entropy/device.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "eaas/error.hpp"

namespace eaas::entropy {

void DeviceModel::validate() const {
  if (!(rate_bps > 0.0) || !std::isfinite(rate_bps)) {
    throw Error(Errc::invalid_argument, "device rate_bps must be positive");
  }
  if (!(p_one >= 0.0 && p_one <= 1.0)) {
    throw Error(Errc::invalid_argument, "device p_one must lie in [0,1]");
  }
  if (!(health_claim > 0.0 && health_claim <= 1.0)) {
    throw Error(Errc::invalid_argument, "device health_claim must lie in (0,1]");
  }
  if (window_bits < 8 || window_bits % 8 != 0) {
    throw Error(Errc::invalid_argument, "device window_bits must be a positive multiple of 8");
  }
}

double DeviceModel::true_min_entropy() const {
  return -std::log2(std::max(p_one, 1.0 - p_one));
}

double generation_time_us(const DeviceModel& model, std::size_t n_bytes) {
  return static_cast<double>(n_bytes) * 8.0 / model.rate_bps * 1e6;
}

EntropyDevice::EntropyDevice(DeviceModel model)
    : model_((model.validate(), std::move(model))),
      threshold_(model_.p_one >= 1.0 ? 0
                                     : static_cast<std::uint64_t>(std::ldexp(model_.p_one, 64))),
      always_one_(model_.p_one >= 1.0),
      engine_(model_.seed),
      health_(model_.health_claim),
      window_(model_.window_bits / 8) {
  for (auto& byte : window_) byte = next_byte();
  BitSpan primed(window_);
  window_ones_ = primed.count_ones();
  health_.feed(primed);
}

std::uint8_t EntropyDevice::next_byte() {
  std::uint8_t out = 0;
  for (int i = 0; i < 8; ++i) {
    const bool one = always_one_ || engine_() < threshold_;
    out = static_cast<std::uint8_t>((out << 1) | (one ? 1u : 0u));
  }
  return out;
}

void EntropyDevice::push_window(std::span<const std::uint8_t> bytes) {
  // Only the tail of an oversized block can survive in the window.
  if (bytes.size() > window_.size()) bytes = bytes.subspan(bytes.size() - window_.size());
  for (auto byte : bytes) {
    window_ones_ -= std::popcount(window_[window_head_]);
    window_ones_ += std::popcount(byte);
    window_[window_head_] = byte;
    window_head_ = (window_head_ + 1) % window_.size();
  }
}

EntropyBlock EntropyDevice::generate(std::size_t n_bytes) {
  if (n_bytes == 0) throw Error(Errc::invalid_argument, "n_bytes must be at least 1");

  std::lock_guard lock(mu_);
  EntropyBlock block;
  block.data.resize(n_bytes);
  for (auto& byte : block.data) byte = next_byte();

  const BitSpan bits(block.data);
  const auto health = health_.feed(bits);
  push_window(block.data);

  const auto h = min_entropy_from_counts(window_ones_, model_.window_bits);
  const auto q = q_factor(bits);
  block.quality = {h.value, q.value, health.ok, model_.window_bits,
                   h.low_confidence || q.low_confidence};
  block.device_id = model_.device_id;
  block.t_gen_us = generation_time_us(model_, n_bytes);
  block.sequence = ++sequence_;
  return block;
}

std::uint64_t EntropyDevice::blocks_generated() const {
  std::lock_guard lock(mu_);
  return sequence_;
}

}  // namespace eaas::entropy
