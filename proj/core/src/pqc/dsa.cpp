#include "eaas/pqc/dsa.hpp"

#include <algorithm>
#include <string>

#include "eaas/error.hpp"

namespace eaas::pqc {

namespace {

void append(Bytes& out, ByteView part) { out.insert(out.end(), part.begin(), part.end()); }

void require_dsa(const Scheme& scheme) {
  if (scheme.kind() != Kind::dsa) throw Error(Errc::invalid_argument, scheme.name() + " is not a DSA");
}

void require_size(ByteView v, std::size_t expected, const char* what, const std::string& scheme) {
  if (v.size() != expected) {
    throw Error(Errc::invalid_argument, scheme + ": " + what + " is " + std::to_string(v.size()) +
                                            " bytes, expected " + std::to_string(expected));
  }
}

Bytes sign_component(const AlgorithmProfile& p, ByteView pk, ByteView message, ByteView r) {
  Bytes sig(r.begin(), r.end());
  append(sig, xof({as_bytes("sig"), pk, r, message}, p.ct_or_sig_size - r.size()));
  return sig;
}

}  // namespace

DsaKeyPair dsa_keygen_from_seed(const Scheme& scheme, ByteView seed) {
  require_dsa(scheme);
  require_size(seed, scheme.keygen_random_bytes(), "keygen seed", scheme.name());
  DsaKeyPair kp;
  std::size_t offset = 0;
  for (const auto& p : scheme.components()) {
    append(kp.pk, xof({as_bytes("dsa-pk"), seed.subspan(offset, p.keygen_random_bytes)}, p.pk_size));
    offset += p.keygen_random_bytes;
  }
  kp.sk = kp.pk;
  return kp;
}

DsaKeyPair dsa_keygen(const Scheme& scheme, EntropySource& entropy) {
  require_dsa(scheme);
  const auto seed = entropy.draw(scheme.keygen_random_bytes());
  return dsa_keygen_from_seed(scheme, seed);
}

Bytes dsa_sign_with(const Scheme& scheme, ByteView sk, ByteView message, ByteView randomness) {
  require_dsa(scheme);
  require_size(sk, scheme.pk_size(), "signing key", scheme.name());
  require_size(randomness, scheme.op_random_bytes(), "signing randomness", scheme.name());
  Bytes sig;
  sig.reserve(scheme.ct_or_sig_size());
  std::size_t k_off = 0;
  std::size_t r_off = 0;
  for (const auto& p : scheme.components()) {
    append(sig, sign_component(p, sk.subspan(k_off, p.pk_size), message,
                               randomness.subspan(r_off, p.op_random_bytes)));
    k_off += p.pk_size;
    r_off += p.op_random_bytes;
  }
  return sig;
}

Bytes dsa_sign(const Scheme& scheme, ByteView sk, ByteView message, EntropySource& entropy) {
  require_dsa(scheme);
  require_size(sk, scheme.pk_size(), "signing key", scheme.name());
  const auto r = entropy.draw(scheme.op_random_bytes());
  return dsa_sign_with(scheme, sk, message, r);
}

bool dsa_verify(const Scheme& scheme, ByteView pk, ByteView message, ByteView sig) {
  require_dsa(scheme);
  require_size(pk, scheme.pk_size(), "public key", scheme.name());
  if (sig.size() != scheme.ct_or_sig_size()) return false;
  bool all_ok = true;
  std::size_t k_off = 0;
  std::size_t s_off = 0;
  for (const auto& p : scheme.components()) {
    const auto part = sig.subspan(s_off, p.ct_or_sig_size);
    const auto expected = sign_component(p, pk.subspan(k_off, p.pk_size), message,
                                         part.first(p.op_random_bytes));
    all_ok &= std::equal(part.begin(), part.end(), expected.begin(), expected.end());
    k_off += p.pk_size;
    s_off += p.ct_or_sig_size;
  }
  return all_ok;
}

}  // namespace eaas::pqc
