// Private CA: create a root, issue leaf certificates, check a chain.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "eaas/pki/certificate.hpp"
#include "eaas/pqc/dsa.hpp"
#include "eaas/protocol/client.hpp"
#include "tool_support.hpp"

namespace fs = std::filesystem;

namespace {

std::unique_ptr<eaas::pqc::EntropySource> make_entropy(const std::string& eaas_addr,
                                                       std::unique_ptr<eaas::protocol::EaasClient>& client) {
  if (eaas_addr.empty()) return std::make_unique<eaas::pqc::PrngEntropySource>(std::random_device{}());
  client = std::make_unique<eaas::protocol::EaasClient>(eaas::net::Endpoint::parse(eaas_addr));
  return std::make_unique<eaas::protocol::EaasEntropySource>(*client);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-signed CA for the TLS harness"};
  app.require_subcommand(1);
  std::string catalog_path = eaas::pqc::default_catalog_path().string();
  std::string eaas_addr;
  app.add_option("--catalog", catalog_path, "algorithm catalog JSON");
  app.add_option("--eaas", eaas_addr, "draw key material from this EaaS instead of a local PRNG");

  auto* init = app.add_subcommand("init", "create a root CA");
  std::string dsa = "p384_dilithium3";
  std::string subject = "eaas-local-root";
  std::string dir = "pki";
  init->add_option("--dsa", dsa, "signature profile");
  init->add_option("--subject", subject, "root subject name");
  init->add_option("--dir", dir, "output directory for ca.cert and ca.key");

  auto* issue = app.add_subcommand("issue", "issue a leaf certificate");
  std::string leaf_subject;
  std::string out_prefix;
  issue->add_option("--dir", dir, "CA directory written by init");
  issue->add_option("--subject", leaf_subject, "leaf subject name")->required();
  issue->add_option("--out", out_prefix, "output prefix for <out>.cert and <out>.key (default: dir/subject)");

  auto* verify = app.add_subcommand("verify", "check a leaf against a root");
  std::string ca_path;
  std::string cert_path;
  verify->add_option("--ca", ca_path, "root certificate")->required();
  verify->add_option("--cert", cert_path, "leaf certificate")->required();

  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    const auto catalog = eaas::pqc::Catalog::load(catalog_path);
    std::unique_ptr<eaas::protocol::EaasClient> client;

    if (*init) {
      auto entropy = make_entropy(eaas_addr, client);
      auto ca = eaas::pki::create_root_ca(catalog.dsa(dsa), subject, *entropy);
      fs::create_directories(dir);
      eaas::pki::save_certificate(fs::path(dir) / "ca.cert", ca.root_cert);
      eaas::pki::write_file(fs::path(dir) / "ca.key",
                            eaas::pki::encode_key({ca.dsa.name(), ca.root_sk, ca.next_serial}));
      std::printf("root %s (%s) written to %s\n", subject.c_str(), dsa.c_str(), dir.c_str());
      return 0;
    }
    if (*issue) {
      auto entropy = make_entropy(eaas_addr, client);
      const auto root = eaas::pki::load_certificate(fs::path(dir) / "ca.cert");
      const auto key = eaas::pki::decode_key(eaas::pki::read_file(fs::path(dir) / "ca.key"));
      auto ca = eaas::pki::restore_ca(catalog, root, key.sk, key.next_serial);
      const auto leaf_key = eaas::pqc::dsa_keygen(ca.dsa, *entropy);
      const auto cert = eaas::pki::issue_certificate(ca, leaf_subject, leaf_key.pk, *entropy);
      const fs::path prefix = out_prefix.empty() ? fs::path(dir) / leaf_subject : fs::path(out_prefix);
      eaas::pki::save_certificate(prefix.string() + ".cert", cert);
      eaas::pki::write_file(prefix.string() + ".key", eaas::pki::encode_key({ca.dsa.name(), leaf_key.sk, 0}));
      eaas::pki::write_file(fs::path(dir) / "ca.key",
                            eaas::pki::encode_key({ca.dsa.name(), ca.root_sk, ca.next_serial}));
      std::printf("issued serial %llu to %s\n", static_cast<unsigned long long>(cert.serial),
                  leaf_subject.c_str());
      return 0;
    }
    const auto root = eaas::pki::load_certificate(ca_path);
    const auto cert = eaas::pki::load_certificate(cert_path);
    const bool ok = eaas::pki::verify_chain(catalog, cert, root);
    std::printf("%s\n", ok ? "valid" : "invalid");
    return ok ? 0 : 1;
  });
}
