#include "eaas/bits.hpp"

#include <bit>

#include "eaas/error.hpp"

namespace eaas {

BitSpan::BitSpan(std::span<const std::uint8_t> bytes, std::size_t n_bits)
    : bytes_(bytes), n_bits_(n_bits) {
  if (n_bits > bytes.size() * 8) {
    throw Error(Errc::invalid_argument, "bit count exceeds buffer");
  }
}

std::uint64_t BitSpan::count_ones() const noexcept {
  std::uint64_t ones = 0;
  const std::size_t full = n_bits_ / 8;
  for (std::size_t i = 0; i < full; ++i) ones += std::popcount(bytes_[i]);
  for (std::size_t i = full * 8; i < n_bits_; ++i) ones += (*this)[i];
  return ones;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bit_values) {
  std::vector<std::uint8_t> out((bit_values.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bit_values.size(); ++i) {
    if (bit_values[i]) out[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
  }
  return out;
}

}  // namespace eaas
