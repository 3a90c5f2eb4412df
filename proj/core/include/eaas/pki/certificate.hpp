#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "eaas/pqc/catalog.hpp"
#include "eaas/pqc/entropy_source.hpp"
#include "eaas/pqc/xof.hpp"

namespace eaas::pki {

using pqc::Bytes;
using pqc::ByteView;

// Canonical layout, all integers big-endian:
//
//   "EQC1" | serial u64 | u8 len + subject | u8 len + issuer |
//   u8 len + dsa_profile | u32 len + subject_pk | u32 len + signature
//
// The signature covers every byte before its own length field.
inline constexpr std::size_t kCertificateFixedHeader = 23;
inline constexpr std::size_t kMaxCertificateMetadata = 128;

struct Certificate {
  std::string subject;
  Bytes subject_pk;
  std::string dsa_profile;  // algorithm of both subject_pk and signature
  std::string issuer;
  std::uint64_t serial = 0;
  Bytes signature;

  Bytes body_bytes() const;
  Bytes encode() const;
  std::size_t metadata_size() const noexcept {
    return subject.size() + issuer.size() + dsa_profile.size();
  }

  static Certificate decode(ByteView encoded);

  bool operator==(const Certificate&) const = default;
};

// Encoded size as a function of the key and signature sizes.
std::size_t encoded_certificate_size(std::size_t pk_size, std::size_t sig_size,
                                     std::size_t metadata_size);

struct CaState {
  pqc::Scheme dsa;
  Certificate root_cert;
  Bytes root_sk;
  std::uint64_t next_serial = 1;
};

// Rebuilds a CA from its stored certificate and key.
CaState restore_ca(const pqc::Catalog& catalog, Certificate root_cert, Bytes root_sk,
                   std::uint64_t next_serial);

// Self-signed root; the root certificate takes serial 1.
CaState create_root_ca(const pqc::Scheme& dsa, std::string subject, pqc::EntropySource& entropy);

Certificate issue_certificate(CaState& ca, std::string subject, ByteView subject_pk,
                              pqc::EntropySource& entropy);

// True iff `cert` names the root as issuer, uses the root's algorithm, and
// its signature verifies under the root key. Never throws.
bool verify_chain(const pqc::Catalog& catalog, const Certificate& cert, const Certificate& root);

// A subject key pair bundled for storage next to its certificate.
struct KeyFile {
  std::string dsa_profile;
  Bytes sk;
  std::uint64_t next_serial = 0;  // nonzero only for a CA key
};

void write_file(const std::filesystem::path& path, ByteView bytes);
Bytes read_file(const std::filesystem::path& path);

Bytes encode_key(const KeyFile& key);
KeyFile decode_key(ByteView encoded);

void save_certificate(const std::filesystem::path& path, const Certificate& cert);
Certificate load_certificate(const std::filesystem::path& path);

}  // namespace eaas::pki
