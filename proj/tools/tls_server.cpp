// TLS-style handshake server for one KEM.
#include <CLI11.hpp>

#include <cstdio>

#include "eaas/pki/certificate.hpp"
#include "eaas/tls/handshake.hpp"
#include "tool_support.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Handshake server fetching its KEM randomness from an EaaS"};
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::string kem;
  std::string dsa;
  std::string cert_path;
  std::string key_path;
  std::string ca_path;
  std::string client_ca_path;
  std::string eaas_addr;
  std::string catalog_path = eaas::pqc::default_catalog_path().string();
  app.add_option("--host", host, "bind address");
  app.add_option("--port", port, "listen port (0 picks one)");
  app.add_option("--kem", kem, "KEM profile")->required();
  app.add_option("--dsa", dsa, "expected signature profile of --cert");
  app.add_option("--cert", cert_path, "server certificate")->required();
  app.add_option("--key", key_path, "server key file")->required();
  app.add_option("--ca", ca_path, "root certificate sent after the leaf");
  app.add_option("--client-ca", client_ca_path, "enable mutual authentication against this root");
  app.add_option("--eaas", eaas_addr, "EaaS host:port")->required();
  app.add_option("--catalog", catalog_path, "algorithm catalog JSON");
  CLI11_PARSE(app, argc, argv);

  tools::block_shutdown_signals();
  return tools::guarded([&] {
    auto catalog = eaas::pqc::Catalog::load(catalog_path);
    eaas::tls::TlsServerConfig cfg;
    cfg.listen = {host, port};
    cfg.kem = kem;
    cfg.eaas = eaas::net::Endpoint::parse(eaas_addr);
    const auto leaf = eaas::pki::load_certificate(cert_path);
    if (!dsa.empty() && dsa != leaf.dsa_profile) {
      throw eaas::Error(eaas::Errc::invalid_argument,
                        "certificate uses " + leaf.dsa_profile + ", --dsa says " + dsa);
    }
    cfg.identity.chain.push_back(leaf);
    if (!ca_path.empty()) cfg.identity.chain.push_back(eaas::pki::load_certificate(ca_path));
    cfg.identity.sk = eaas::pki::decode_key(eaas::pki::read_file(key_path)).sk;
    if (!client_ca_path.empty()) cfg.client_root = eaas::pki::load_certificate(client_ca_path);

    eaas::tls::TlsServer server(std::move(catalog), std::move(cfg));
    std::printf("tls-server %s listening on %s\n", kem.c_str(), server.endpoint().to_string().c_str());
    std::fflush(stdout);
    tools::wait_for_shutdown_signal();
    server.stop();
    const auto s = server.stats();
    std::fprintf(stderr, "handshakes: %llu ok, %llu failed\n", static_cast<unsigned long long>(s.succeeded),
                 static_cast<unsigned long long>(s.failed));
    return 0;
  });
}
