#include "eaas/pqc/xof.hpp"

#include <openssl/evp.h>

#include "eaas/error.hpp"

namespace eaas::pqc {

struct Xof::Ctx {
  EVP_MD_CTX* md = nullptr;
  bool finalized = false;
  ~Ctx() { EVP_MD_CTX_free(md); }
};

Xof::Xof() : ctx_(std::make_unique<Ctx>()) {
  ctx_->md = EVP_MD_CTX_new();
  if (ctx_->md == nullptr || EVP_DigestInit_ex(ctx_->md, EVP_shake256(), nullptr) != 1) {
    throw Error(Errc::startup, "SHAKE256 unavailable");
  }
}

Xof::~Xof() = default;
Xof::Xof(Xof&&) noexcept = default;
Xof& Xof::operator=(Xof&&) noexcept = default;

Xof& Xof::absorb(ByteView data) {
  if (ctx_->finalized) throw Error(Errc::invalid_argument, "absorb after squeeze");
  if (!data.empty() && EVP_DigestUpdate(ctx_->md, data.data(), data.size()) != 1) {
    throw Error(Errc::io, "SHAKE256 update failed");
  }
  return *this;
}

Bytes Xof::squeeze(std::size_t out_len) {
  if (ctx_->finalized) throw Error(Errc::invalid_argument, "xof already squeezed");
  ctx_->finalized = true;
  Bytes out(out_len);
  if (out_len == 0) return out;
  if (EVP_DigestFinalXOF(ctx_->md, out.data(), out_len) != 1) {
    throw Error(Errc::io, "SHAKE256 finalize failed");
  }
  return out;
}

Bytes xof(std::initializer_list<ByteView> parts, std::size_t out_len) {
  Xof x;
  for (auto part : parts) x.absorb(part);
  return x.squeeze(out_len);
}

}  // namespace eaas::pqc
