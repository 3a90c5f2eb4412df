#include "eaas/pki/certificate.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "eaas/error.hpp"
#include "eaas/pqc/dsa.hpp"

namespace eaas::pki {

namespace {

constexpr char kCertMagic[4] = {'E', 'Q', 'C', '1'};
constexpr char kKeyMagic[4] = {'E', 'Q', 'K', '1'};

class Writer {
 public:
  void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void be(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str8(const std::string& s) {
    if (s.size() > 255) throw Error(Errc::invalid_argument, "field longer than 255 bytes");
    u8(static_cast<std::uint8_t>(s.size()));
    raw(pqc::as_bytes(s));
  }
  void bytes32(ByteView b) {
    be(b.size(), 4);
    raw(b);
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}
  ByteView raw(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(Errc::invalid_argument, "truncated encoding");
    auto v = in_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  std::uint64_t be(int width) {
    std::uint64_t v = 0;
    for (auto b : raw(static_cast<std::size_t>(width))) v = (v << 8) | b;
    return v;
  }
  std::string str8() {
    const auto n = raw(1)[0];
    auto v = raw(n);
    return {v.begin(), v.end()};
  }
  Bytes bytes32() {
    auto v = raw(static_cast<std::size_t>(be(4)));
    return {v.begin(), v.end()};
  }
  bool done() const noexcept { return pos_ == in_.size(); }

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

ByteView magic(const char (&m)[4]) { return {reinterpret_cast<const std::uint8_t*>(m), 4}; }

}  // namespace

Bytes Certificate::body_bytes() const {
  if (metadata_size() > kMaxCertificateMetadata) {
    throw Error(Errc::invalid_argument, "certificate names exceed 128 bytes of metadata");
  }
  Writer w;
  w.raw(magic(kCertMagic));
  w.be(serial, 8);
  w.str8(subject);
  w.str8(issuer);
  w.str8(dsa_profile);
  w.bytes32(subject_pk);
  return w.take();
}

Bytes Certificate::encode() const {
  Writer w;
  w.raw(body_bytes());
  w.bytes32(signature);
  return w.take();
}

Certificate Certificate::decode(ByteView encoded) {
  Reader r(encoded);
  const auto m = r.raw(4);
  if (!std::equal(m.begin(), m.end(), kCertMagic)) throw Error(Errc::invalid_argument, "not a certificate");
  Certificate c;
  c.serial = r.be(8);
  c.subject = r.str8();
  c.issuer = r.str8();
  c.dsa_profile = r.str8();
  c.subject_pk = r.bytes32();
  c.signature = r.bytes32();
  if (!r.done()) throw Error(Errc::invalid_argument, "trailing bytes after certificate");
  if (c.metadata_size() > kMaxCertificateMetadata) {
    throw Error(Errc::invalid_argument, "certificate metadata too large");
  }
  return c;
}

std::size_t encoded_certificate_size(std::size_t pk_size, std::size_t sig_size,
                                     std::size_t metadata_size) {
  return kCertificateFixedHeader + metadata_size + pk_size + sig_size;
}

CaState create_root_ca(const pqc::Scheme& dsa, std::string subject, pqc::EntropySource& entropy) {
  if (dsa.kind() != pqc::Kind::dsa) throw Error(Errc::invalid_argument, dsa.name() + " is not a DSA");
  auto kp = pqc::dsa_keygen(dsa, entropy);
  CaState ca{dsa, {}, {}, 1};
  ca.root_cert.subject = subject;
  ca.root_cert.issuer = std::move(subject);
  ca.root_cert.dsa_profile = dsa.name();
  ca.root_cert.subject_pk = kp.pk;
  ca.root_cert.serial = 1;
  ca.root_sk = std::move(kp.sk);
  ca.root_cert.signature = pqc::dsa_sign(dsa, ca.root_sk, ca.root_cert.body_bytes(), entropy);
  ca.next_serial = 2;
  return ca;
}

Certificate issue_certificate(CaState& ca, std::string subject, ByteView subject_pk,
                              pqc::EntropySource& entropy) {
  Certificate cert;
  cert.subject = std::move(subject);
  cert.subject_pk.assign(subject_pk.begin(), subject_pk.end());
  cert.dsa_profile = ca.root_cert.dsa_profile;
  cert.issuer = ca.root_cert.subject;
  cert.serial = ca.next_serial;
  const auto body = cert.body_bytes();  // checks metadata bounds before any entropy is spent
  cert.signature = pqc::dsa_sign(ca.dsa, ca.root_sk, body, entropy);
  ++ca.next_serial;
  return cert;
}

CaState restore_ca(const pqc::Catalog& catalog, Certificate root_cert, Bytes root_sk,
                   std::uint64_t next_serial) {
  const auto& scheme = catalog.dsa(root_cert.dsa_profile);
  if (root_sk.size() != scheme.pk_size()) throw Error(Errc::invalid_argument, "CA key size mismatch");
  if (!verify_chain(catalog, root_cert, root_cert)) {
    throw Error(Errc::chain_invalid, "stored root certificate does not self-verify");
  }
  return CaState{scheme, std::move(root_cert), std::move(root_sk), next_serial};
}

bool verify_chain(const pqc::Catalog& catalog, const Certificate& cert, const Certificate& root) {
  try {
    if (cert.issuer != root.subject) return false;
    if (cert.dsa_profile != root.dsa_profile) return false;
    if (root.issuer != root.subject) return false;
    const auto& scheme = catalog.dsa(root.dsa_profile);
    if (root.subject_pk.size() != scheme.pk_size()) return false;
    if (cert.subject_pk.size() != scheme.pk_size()) return false;
    return pqc::dsa_verify(scheme, root.subject_pk, cert.body_bytes(), cert.signature);
  } catch (const Error&) {
    return false;
  }
}

Bytes encode_key(const KeyFile& key) {
  Writer w;
  w.raw(magic(kKeyMagic));
  w.str8(key.dsa_profile);
  w.bytes32(key.sk);
  w.be(key.next_serial, 8);
  return w.take();
}

KeyFile decode_key(ByteView encoded) {
  Reader r(encoded);
  const auto m = r.raw(4);
  if (!std::equal(m.begin(), m.end(), kKeyMagic)) throw Error(Errc::invalid_argument, "not a key file");
  KeyFile key;
  key.dsa_profile = r.str8();
  key.sk = r.bytes32();
  key.next_serial = r.be(8);
  if (!r.done()) throw Error(Errc::invalid_argument, "trailing bytes after key");
  return key;
}

void write_file(const std::filesystem::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void save_certificate(const std::filesystem::path& path, const Certificate& cert) {
  write_file(path, cert.encode());
}

Certificate load_certificate(const std::filesystem::path& path) {
  return Certificate::decode(read_file(path));
}

}  // namespace eaas::pki
