#include "eaas/pqc/kem.hpp"

#include <algorithm>
#include <string>

#include "eaas/error.hpp"

namespace eaas::pqc {

namespace {

void append(Bytes& out, ByteView part) { out.insert(out.end(), part.begin(), part.end()); }

void require_size(ByteView v, std::size_t expected, const char* what, const std::string& scheme) {
  if (v.size() != expected) {
    throw Error(Errc::invalid_argument, scheme + ": " + what + " is " + std::to_string(v.size()) +
                                            " bytes, expected " + std::to_string(expected));
  }
}

Bytes component_pk(const AlgorithmProfile& p, ByteView seed) {
  return xof({as_bytes("pk"), seed}, p.pk_size);
}

Bytes mask_for(const AlgorithmProfile& p, ByteView pk) {
  return xof({as_bytes("mask"), pk}, p.ct_or_sig_size);
}

Bytes pad_for(const AlgorithmProfile& p, ByteView pk, ByteView r) {
  return xof({as_bytes("pad"), pk, r}, p.ct_or_sig_size - r.size());
}

Bytes shared_secret(ByteView pk, ByteView r) {
  return xof({as_bytes("ss"), pk, r}, kSharedSecretSize);
}

Encapsulation encapsulate_component(const AlgorithmProfile& p, ByteView pk, ByteView r) {
  Encapsulation out;
  out.ss = shared_secret(pk, r);
  out.ct.reserve(p.ct_or_sig_size);
  append(out.ct, r);
  append(out.ct, pad_for(p, pk, r));
  const auto mask = mask_for(p, pk);
  for (std::size_t i = 0; i < out.ct.size(); ++i) out.ct[i] ^= mask[i];
  return out;
}

Bytes decapsulate_component(const AlgorithmProfile& p, ByteView seed, ByteView ct) {
  const auto pk = component_pk(p, seed);
  auto plain = mask_for(p, pk);
  for (std::size_t i = 0; i < plain.size(); ++i) plain[i] ^= ct[i];
  const ByteView r(plain.data(), p.op_random_bytes);
  const ByteView pad(plain.data() + p.op_random_bytes, plain.size() - p.op_random_bytes);
  const auto expected_pad = pad_for(p, pk, r);
  if (!std::equal(pad.begin(), pad.end(), expected_pad.begin(), expected_pad.end())) {
    return xof({as_bytes("reject"), seed, ct}, kSharedSecretSize);
  }
  return shared_secret(pk, r);
}

}  // namespace

KemKeyPair kem_keygen_from_seed(const Scheme& scheme, ByteView seed) {
  if (scheme.kind() != Kind::kem) throw Error(Errc::invalid_argument, scheme.name() + " is not a KEM");
  require_size(seed, scheme.keygen_random_bytes(), "keygen seed", scheme.name());
  KemKeyPair kp;
  std::size_t offset = 0;
  for (const auto& p : scheme.components()) {
    const auto part = seed.subspan(offset, p.keygen_random_bytes);
    append(kp.pk, component_pk(p, part));
    append(kp.sk, part);
    offset += p.keygen_random_bytes;
  }
  return kp;
}

KemKeyPair kem_keygen(const Scheme& scheme, EntropySource& entropy) {
  if (scheme.kind() != Kind::kem) throw Error(Errc::invalid_argument, scheme.name() + " is not a KEM");
  const auto seed = entropy.draw(scheme.keygen_random_bytes());
  return kem_keygen_from_seed(scheme, seed);
}

Encapsulation kem_encapsulate_with(const Scheme& scheme, ByteView pk, ByteView randomness) {
  if (scheme.kind() != Kind::kem) throw Error(Errc::invalid_argument, scheme.name() + " is not a KEM");
  require_size(pk, scheme.pk_size(), "public key", scheme.name());
  require_size(randomness, scheme.op_random_bytes(), "encapsulation randomness", scheme.name());
  Encapsulation out;
  std::size_t pk_off = 0;
  std::size_t r_off = 0;
  for (const auto& p : scheme.components()) {
    auto part = encapsulate_component(p, pk.subspan(pk_off, p.pk_size),
                                      randomness.subspan(r_off, p.op_random_bytes));
    append(out.ct, part.ct);
    append(out.ss, part.ss);
    pk_off += p.pk_size;
    r_off += p.op_random_bytes;
  }
  return out;
}

Encapsulation kem_encapsulate(const Scheme& scheme, ByteView pk, EntropySource& entropy) {
  if (scheme.kind() != Kind::kem) throw Error(Errc::invalid_argument, scheme.name() + " is not a KEM");
  // Validate before drawing so a bad key never costs entropy.
  require_size(pk, scheme.pk_size(), "public key", scheme.name());
  const auto r = entropy.draw(scheme.op_random_bytes());
  return kem_encapsulate_with(scheme, pk, r);
}

Bytes kem_decapsulate(const Scheme& scheme, ByteView sk, ByteView ct) {
  if (scheme.kind() != Kind::kem) throw Error(Errc::invalid_argument, scheme.name() + " is not a KEM");
  require_size(sk, scheme.keygen_random_bytes(), "secret key", scheme.name());
  require_size(ct, scheme.ct_or_sig_size(), "ciphertext", scheme.name());
  Bytes ss;
  std::size_t sk_off = 0;
  std::size_t ct_off = 0;
  for (const auto& p : scheme.components()) {
    append(ss, decapsulate_component(p, sk.subspan(sk_off, p.keygen_random_bytes),
                                     ct.subspan(ct_off, p.ct_or_sig_size)));
    sk_off += p.keygen_random_bytes;
    ct_off += p.ct_or_sig_size;
  }
  return ss;
}

}  // namespace eaas::pqc
