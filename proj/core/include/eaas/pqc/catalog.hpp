#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eaas::pqc {

enum class Kind { kem, dsa };

std::string_view to_string(Kind kind) noexcept;

inline constexpr std::size_t kDefaultKeygenRandomBytes = 32;

struct AlgorithmProfile {
  std::string name;
  Kind kind = Kind::kem;
  int security_level = 1;
  std::size_t pk_size = 0;
  std::size_t sk_size = 0;
  std::size_t ct_or_sig_size = 0;
  std::size_t keygen_random_bytes = kDefaultKeygenRandomBytes;
  std::size_t op_random_bytes = 0;  // encapsulation or signing
  std::string family;               // groups security levels of one algorithm

  bool operator==(const AlgorithmProfile&) const = default;
};

// A usable algorithm: either one profile, or a hybrid of a traditional and a
// post-quantum profile of the same kind. Hybrid artifacts are the
// concatenation traditional || post_quantum, so every size is a sum.
class Scheme {
 public:
  explicit Scheme(AlgorithmProfile single);
  Scheme(AlgorithmProfile traditional, AlgorithmProfile post_quantum);

  const std::string& name() const noexcept { return name_; }
  Kind kind() const noexcept { return parts_.front().kind; }
  bool is_hybrid() const noexcept { return parts_.size() == 2; }
  std::span<const AlgorithmProfile> components() const noexcept { return parts_; }
  const AlgorithmProfile& traditional() const { return parts_.front(); }
  const AlgorithmProfile& post_quantum() const { return parts_.back(); }
  int security_level() const noexcept;

  std::size_t pk_size() const noexcept;
  std::size_t sk_size() const noexcept;
  std::size_t ct_or_sig_size() const noexcept;
  std::size_t keygen_random_bytes() const noexcept;
  std::size_t op_random_bytes() const noexcept;

 private:
  std::string name_;
  std::vector<AlgorithmProfile> parts_;
};

// Encapsulation randomness the reference KEMs are known to draw. A catalog
// that disagrees is rejected.
struct NormativeDemand {
  std::string_view name;
  std::size_t encaps_random_bytes;
};
inline constexpr NormativeDemand kNormativeEncapsDemand[] = {
    {"kyber768", 32}, {"bikel3", 64}, {"hqc192", 24}, {"frodo976aes", 24}, {"frodo976shake", 24},
};

// Immutable after load. KEM and DSA names live in separate namespaces, so
// "p384" can name both the ECDH group and the ECDSA curve.
class Catalog {
 public:
  static Catalog load(const std::filesystem::path& path);
  static Catalog parse(std::string_view json_text, std::filesystem::path source = {});

  const Scheme& kem(std::string_view name) const;
  const Scheme& dsa(std::string_view name) const;
  const Scheme& get(Kind kind, std::string_view name) const;
  bool contains(Kind kind, std::string_view name) const;

  std::vector<std::string> names(Kind kind) const;
  const std::vector<AlgorithmProfile>& profiles() const noexcept { return profiles_; }
  const std::filesystem::path& source_path() const noexcept { return source_; }

 private:
  std::vector<AlgorithmProfile> profiles_;
  std::map<std::string, Scheme, std::less<>> kems_;
  std::map<std::string, Scheme, std::less<>> dsas_;
  std::filesystem::path source_;
};

// Within each family, a higher security level never shrinks pk, sk, or
// ct/sig. Returns the offending profile name, or empty when consistent.
std::string find_sizing_violation(std::span<const AlgorithmProfile> profiles);

// Catalog shipped with the source tree (compile-time path).
std::filesystem::path default_catalog_path();

}  // namespace eaas::pqc
