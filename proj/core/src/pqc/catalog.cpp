#include "eaas/pqc/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "eaas/error.hpp"

#ifndef EAAS_DEFAULT_CATALOG
#define EAAS_DEFAULT_CATALOG "catalog.json"
#endif

namespace eaas::pqc {

using nlohmann::json;

std::string_view to_string(Kind kind) noexcept { return kind == Kind::kem ? "kem" : "dsa"; }

Scheme::Scheme(AlgorithmProfile single) : name_(single.name), parts_{std::move(single)} {}

Scheme::Scheme(AlgorithmProfile traditional, AlgorithmProfile post_quantum)
    : name_(traditional.name + "_" + post_quantum.name),
      parts_{std::move(traditional), std::move(post_quantum)} {
  if (parts_[0].kind != parts_[1].kind) {
    throw Error(Errc::catalog_invalid, "hybrid " + name_ + " mixes KEM and DSA components");
  }
}

namespace {

template <typename F>
std::size_t sum_over(std::span<const AlgorithmProfile> parts, F field) {
  return std::accumulate(parts.begin(), parts.end(), std::size_t{0},
                         [&](std::size_t acc, const AlgorithmProfile& p) { return acc + field(p); });
}

}  // namespace

int Scheme::security_level() const noexcept {
  // A hybrid is graded by its post-quantum half.
  return parts_.back().security_level;
}

std::size_t Scheme::pk_size() const noexcept {
  return sum_over(parts_, [](const auto& p) { return p.pk_size; });
}
std::size_t Scheme::sk_size() const noexcept {
  return sum_over(parts_, [](const auto& p) { return p.sk_size; });
}
std::size_t Scheme::ct_or_sig_size() const noexcept {
  return sum_over(parts_, [](const auto& p) { return p.ct_or_sig_size; });
}
std::size_t Scheme::keygen_random_bytes() const noexcept {
  return sum_over(parts_, [](const auto& p) { return p.keygen_random_bytes; });
}
std::size_t Scheme::op_random_bytes() const noexcept {
  return sum_over(parts_, [](const auto& p) { return p.op_random_bytes; });
}

namespace {

[[noreturn]] void invalid(const std::string& entry, const std::string& why) {
  throw Error(Errc::catalog_invalid, "entry '" + entry + "': " + why);
}

Kind parse_kind(const std::string& entry, const std::string& text) {
  if (text == "kem" || text == "KEM") return Kind::kem;
  if (text == "dsa" || text == "DSA") return Kind::dsa;
  invalid(entry, "unknown kind '" + text + "'");
}

AlgorithmProfile parse_profile(const json& j) {
  AlgorithmProfile p;
  p.name = j.at("name").get<std::string>();
  if (p.name.empty()) invalid("<unnamed>", "empty name");
  p.kind = parse_kind(p.name, j.at("kind").get<std::string>());
  p.security_level = j.at("sl").get<int>();
  p.pk_size = j.at("pk").get<std::size_t>();
  p.sk_size = j.at("sk").get<std::size_t>();
  p.ct_or_sig_size = j.at("ctsig").get<std::size_t>();
  p.keygen_random_bytes = j.value("keygen_rand", kDefaultKeygenRandomBytes);
  p.op_random_bytes = j.value("op_rand", std::size_t{0});
  p.family = j.value("family", p.name);

  if (p.security_level < 1 || p.security_level > 5) invalid(p.name, "security level outside 1..5");
  if (p.pk_size < 1 || p.sk_size < 1 || p.ct_or_sig_size < 1) invalid(p.name, "sizes must be >= 1");
  if (p.keygen_random_bytes < 1) invalid(p.name, "keygen_rand must be >= 1");
  if (p.kind == Kind::kem && p.op_random_bytes < 1) invalid(p.name, "KEM op_rand must be >= 1");
  if (p.op_random_bytes > p.ct_or_sig_size) invalid(p.name, "op_rand exceeds ciphertext/signature size");
  return p;
}

}  // namespace

Catalog Catalog::parse(std::string_view json_text, std::filesystem::path source) {
  Catalog cat;
  cat.source_ = std::move(source);
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::catalog_invalid, std::string("parse error: ") + e.what());
  }

  try {
    std::map<std::pair<Kind, std::string>, AlgorithmProfile> by_name;
    for (const auto& entry : doc.at("profiles")) {
      auto p = parse_profile(entry);
      if (!by_name.emplace(std::pair{p.kind, p.name}, p).second) invalid(p.name, "duplicate name");
      cat.profiles_.push_back(p);
      (p.kind == Kind::kem ? cat.kems_ : cat.dsas_).emplace(p.name, Scheme(p));
    }

    for (const auto& norm : kNormativeEncapsDemand) {
      const auto it = by_name.find({Kind::kem, std::string(norm.name)});
      if (it == by_name.end()) continue;
      if (it->second.op_random_bytes != norm.encaps_random_bytes) {
        invalid(it->second.name, "encapsulation randomness " + std::to_string(it->second.op_random_bytes) +
                                     " != normative " + std::to_string(norm.encaps_random_bytes));
      }
    }

    if (doc.contains("hybrids")) {
      for (const auto& entry : doc.at("hybrids")) {
        const auto name = entry.at("name").get<std::string>();
        const auto kind = parse_kind(name, entry.at("kind").get<std::string>());
        const auto trad = by_name.find({kind, entry.at("traditional").get<std::string>()});
        const auto pqc = by_name.find({kind, entry.at("post_quantum").get<std::string>()});
        if (trad == by_name.end() || pqc == by_name.end()) invalid(name, "references unknown component");
        Scheme hybrid(trad->second, pqc->second);
        if (hybrid.name() != name) invalid(name, "hybrid name must be " + hybrid.name());
        auto& table = kind == Kind::kem ? cat.kems_ : cat.dsas_;
        if (!table.emplace(name, std::move(hybrid)).second) invalid(name, "duplicate name");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::catalog_invalid, std::string("schema error: ") + e.what());
  }

  if (auto bad = find_sizing_violation(cat.profiles_); !bad.empty()) {
    invalid(bad, "a higher security level shrinks key or ciphertext sizes within its family");
  }
  return cat;
}

Catalog Catalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::catalog_invalid, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const Scheme& Catalog::get(Kind kind, std::string_view name) const {
  const auto& table = kind == Kind::kem ? kems_ : dsas_;
  const auto it = table.find(name);
  if (it == table.end()) {
    throw Error(Errc::invalid_argument,
                "unknown " + std::string(to_string(kind)) + " profile '" + std::string(name) + "'");
  }
  return it->second;
}

const Scheme& Catalog::kem(std::string_view name) const { return get(Kind::kem, name); }
const Scheme& Catalog::dsa(std::string_view name) const { return get(Kind::dsa, name); }

bool Catalog::contains(Kind kind, std::string_view name) const {
  const auto& table = kind == Kind::kem ? kems_ : dsas_;
  return table.find(name) != table.end();
}

std::vector<std::string> Catalog::names(Kind kind) const {
  const auto& table = kind == Kind::kem ? kems_ : dsas_;
  std::vector<std::string> out;
  for (const auto& [name, _] : table) out.push_back(name);
  return out;
}

std::string find_sizing_violation(std::span<const AlgorithmProfile> profiles) {
  for (const auto& a : profiles) {
    for (const auto& b : profiles) {
      if (a.kind != b.kind || a.family != b.family || a.security_level >= b.security_level) continue;
      if (b.pk_size < a.pk_size || b.sk_size < a.sk_size || b.ct_or_sig_size < a.ct_or_sig_size) {
        return b.name;
      }
    }
  }
  return {};
}

std::filesystem::path default_catalog_path() { return EAAS_DEFAULT_CATALOG; }

}  // namespace eaas::pqc
