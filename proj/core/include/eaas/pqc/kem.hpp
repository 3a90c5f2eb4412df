#pragma once

#include "eaas/pqc/catalog.hpp"
#include "eaas/pqc/entropy_source.hpp"
#include "eaas/pqc/xof.hpp"

// Size- and randomness-faithful stand-ins for real KEMs. NOT SECURE: the
// public key is derived from the secret by a public function and the
// ciphertext is a keyed mask of the sender's randomness. They exist to
// reproduce wire sizes and entropy demand, nothing else.
namespace eaas::pqc {

inline constexpr std::size_t kSharedSecretSize = 32;

struct KemKeyPair {
  Bytes pk;
  Bytes sk;  // the drawn keygen seed(s)
};

struct Encapsulation {
  Bytes ct;
  Bytes ss;  // 32 bytes per component
};

// One draw of scheme.keygen_random_bytes() from `entropy`.
KemKeyPair kem_keygen(const Scheme& scheme, EntropySource& entropy);
KemKeyPair kem_keygen_from_seed(const Scheme& scheme, ByteView seed);

// One draw of scheme.op_random_bytes() from `entropy`.
Encapsulation kem_encapsulate(const Scheme& scheme, ByteView pk, EntropySource& entropy);
Encapsulation kem_encapsulate_with(const Scheme& scheme, ByteView pk, ByteView randomness);

// Consumes no entropy. A ciphertext that fails re-encryption yields an
// implicit-rejection secret instead of an error.
Bytes kem_decapsulate(const Scheme& scheme, ByteView sk, ByteView ct);

}  // namespace eaas::pqc
