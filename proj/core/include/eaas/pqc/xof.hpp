#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace eaas::pqc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// SHAKE256, the one extendable-output function used everywhere in the mock
// suite (key expansion, masks, signatures, transcript hashes, KDF).
class Xof {
 public:
  Xof();
  ~Xof();
  Xof(Xof&&) noexcept;
  Xof& operator=(Xof&&) noexcept;

  Xof& absorb(ByteView data);
  Xof& absorb(std::string_view label) { return absorb(as_bytes(label)); }

  // Finalizes; the object cannot absorb afterwards.
  Bytes squeeze(std::size_t out_len);

 private:
  struct Ctx;
  std::unique_ptr<Ctx> ctx_;
};

// XOF over the plain concatenation of `parts`.
Bytes xof(std::initializer_list<ByteView> parts, std::size_t out_len);

}  // namespace eaas::pqc
