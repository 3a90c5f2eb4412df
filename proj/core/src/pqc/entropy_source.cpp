#include "eaas/pqc/entropy_source.hpp"

#include <string>

#include "eaas/error.hpp"

namespace eaas::pqc {

std::vector<std::uint8_t> EntropySource::draw(std::size_t n) {
  if (n == 0) return {};
  auto bytes = do_draw(n);
  if (bytes.size() != n) {
    throw Error(Errc::entropy_unavailable,
                "source returned " + std::to_string(bytes.size()) + " of " + std::to_string(n) + " bytes");
  }
  bytes_drawn_ += n;
  ++draws_;
  return bytes;
}

std::vector<std::uint8_t> BufferEntropySource::do_draw(std::size_t n) {
  if (remaining() < n) throw Error(Errc::entropy_unavailable, "replay buffer exhausted");
  std::vector<std::uint8_t> out(bytes_.begin() + static_cast<std::ptrdiff_t>(offset_),
                                bytes_.begin() + static_cast<std::ptrdiff_t>(offset_ + n));
  offset_ += n;
  return out;
}

std::vector<std::uint8_t> UnavailableEntropySource::do_draw(std::size_t) {
  throw Error(Errc::entropy_unavailable, "no entropy source reachable");
}

std::vector<std::uint8_t> PrngEntropySource::do_draw(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng_() >> 56);
  return out;
}

}  // namespace eaas::pqc
