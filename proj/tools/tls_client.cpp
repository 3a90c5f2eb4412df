// Handshake client; prints one JSON record per handshake.
#include <CLI11.hpp>

#include <cstdio>

#include "eaas/pki/certificate.hpp"
#include "eaas/tls/handshake.hpp"
#include "tool_support.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run instrumented handshakes against tls-server"};
  std::string connect;
  std::string kem;
  std::string eaas_addr;
  std::string ca_path;
  std::string cert_path;
  std::string key_path;
  std::string mode = "client_encapsulates";
  std::string catalog_path = eaas::pqc::default_catalog_path().string();
  double delay_ms = 0.0;
  double jitter_ms = 0.0;
  std::size_t mtu = 1448;
  int count = 1;
  std::uint64_t seed = 1;
  app.add_option("--connect", connect, "server host:port")->required();
  app.add_option("--kem", kem, "KEM profile")->required();
  app.add_option("--eaas", eaas_addr, "EaaS host:port")->required();
  app.add_option("--ca", ca_path, "trusted root certificate")->required();
  app.add_option("--cert", cert_path, "client certificate, for mutual authentication");
  app.add_option("--key", key_path, "client key file, for mutual authentication");
  app.add_option("--mode", mode, "client_encapsulates or server_encapsulates");
  app.add_option("--delay-ms", delay_ms, "one-way client-server delay per flight")->check(CLI::NonNegativeNumber);
  app.add_option("--jitter-ms", jitter_ms, "uniform jitter on the delay")->check(CLI::NonNegativeNumber);
  app.add_option("--mtu", mtu, "payload bytes per modeled packet")->check(CLI::Range(256, 65535));
  app.add_option("--count", count, "number of handshakes")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "delay sampler seed");
  app.add_option("--catalog", catalog_path, "algorithm catalog JSON");
  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    const auto catalog = eaas::pqc::Catalog::load(catalog_path);
    eaas::tls::ClientConfig cfg;
    cfg.server = eaas::net::Endpoint::parse(connect);
    cfg.kem = kem;
    cfg.mode = eaas::tls::parse_mode(mode);
    cfg.net = {delay_ms, jitter_ms, mtu};
    cfg.trusted_root = eaas::pki::load_certificate(ca_path);
    if (!cert_path.empty() || !key_path.empty()) {
      if (cert_path.empty() || key_path.empty()) {
        throw eaas::Error(eaas::Errc::invalid_argument, "--cert and --key go together");
      }
      eaas::tls::Identity id;
      id.chain.push_back(eaas::pki::load_certificate(cert_path));
      id.chain.push_back(cfg.trusted_root);
      id.sk = eaas::pki::decode_key(eaas::pki::read_file(key_path)).sk;
      cfg.identity = std::move(id);
    }
    eaas::protocol::EaasClient entropy(eaas::net::Endpoint::parse(eaas_addr));
    eaas::net::DelaySampler sampler(cfg.net, seed);
    bool all_ok = true;
    for (int i = 0; i < count; ++i) {
      const auto rec = eaas::tls::run_handshake(catalog, cfg, entropy, sampler);
      all_ok = all_ok && rec.success;
      std::printf("%s\n", eaas::tls::to_json(rec).c_str());
      std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
  });
}
