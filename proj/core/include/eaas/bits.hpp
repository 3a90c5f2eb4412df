#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eaas {

// A read-only view over the first `size()` bits of a byte buffer. Bits are
// numbered MSB-first within each byte, matching how served bytes are read as
// a bit stream.
class BitSpan {
 public:
  BitSpan() = default;
  explicit BitSpan(std::span<const std::uint8_t> bytes)
      : bytes_(bytes), n_bits_(bytes.size() * 8) {}
  BitSpan(std::span<const std::uint8_t> bytes, std::size_t n_bits);

  std::size_t size() const noexcept { return n_bits_; }
  bool empty() const noexcept { return n_bits_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }

  std::uint64_t count_ones() const noexcept;
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t n_bits_ = 0;
};

// Packs 0/1 values MSB-first; the last byte is zero-padded.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bit_values);

}  // namespace eaas
