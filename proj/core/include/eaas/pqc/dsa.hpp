#pragma once

#include "eaas/pqc/catalog.hpp"
#include "eaas/pqc/entropy_source.hpp"
#include "eaas/pqc/xof.hpp"

// Mock signatures with pk == sk. Anyone holding a certificate can forge;
// only the sizes and the randomness draw are realistic.
namespace eaas::pqc {

struct DsaKeyPair {
  Bytes pk;
  Bytes sk;  // equal to pk
};

DsaKeyPair dsa_keygen(const Scheme& scheme, EntropySource& entropy);
DsaKeyPair dsa_keygen_from_seed(const Scheme& scheme, ByteView seed);

// Draws scheme.op_random_bytes() (zero for deterministic profiles).
Bytes dsa_sign(const Scheme& scheme, ByteView sk, ByteView message, EntropySource& entropy);
Bytes dsa_sign_with(const Scheme& scheme, ByteView sk, ByteView message, ByteView randomness);

// Hybrid signatures verify only if every component verifies. Wrong key
// sizes throw; a wrong-size signature simply fails.
bool dsa_verify(const Scheme& scheme, ByteView pk, ByteView message, ByteView sig);

}  // namespace eaas::pqc
