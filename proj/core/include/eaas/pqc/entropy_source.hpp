#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace eaas::pqc {

// Where every mock primitive takes its randomness from. There is no
// fallback: if the source cannot deliver, the operation fails.
class EntropySource {
 public:
  virtual ~EntropySource() = default;

  // Returns exactly n bytes or throws (entropy-unavailable, transport).
  // A zero-byte draw never touches the underlying source.
  std::vector<std::uint8_t> draw(std::size_t n);

  std::uint64_t bytes_drawn() const noexcept { return bytes_drawn_; }
  std::uint64_t draws() const noexcept { return draws_; }

 protected:
  virtual std::vector<std::uint8_t> do_draw(std::size_t n) = 0;

 private:
  std::uint64_t bytes_drawn_ = 0;
  std::uint64_t draws_ = 0;
};

// Serves a fixed byte string, then reports entropy-unavailable. Test and
// replay helper.
class BufferEntropySource final : public EntropySource {
 public:
  explicit BufferEntropySource(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
  std::size_t remaining() const noexcept { return bytes_.size() - offset_; }

 protected:
  std::vector<std::uint8_t> do_draw(std::size_t n) override;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

// Always unavailable; models an unreachable EaaS.
class UnavailableEntropySource final : public EntropySource {
 protected:
  std::vector<std::uint8_t> do_draw(std::size_t n) override;
};

// Seeded PRNG for provisioning test PKIs and keys outside the measured
// path. Not an entropy source in any real sense.
class PrngEntropySource final : public EntropySource {
 public:
  explicit PrngEntropySource(std::uint64_t seed) : rng_(seed) {}

 protected:
  std::vector<std::uint8_t> do_draw(std::size_t n) override;

 private:
  std::mt19937_64 rng_;
};

}  // namespace eaas::pqc
