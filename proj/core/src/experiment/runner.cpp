#include "eaas/experiment/runner.hpp"

#include <memory>
#include <thread>

#include "eaas/error.hpp"
#include "eaas/pki/certificate.hpp"
#include "eaas/pqc/dsa.hpp"
#include "eaas/pqc/entropy_source.hpp"

namespace eaas::experiment {

std::string_view to_string(Scenario s) noexcept { return s == Scenario::local ? "local" : "online"; }

Scenario parse_scenario(std::string_view text) {
  if (text == "local") return Scenario::local;
  if (text == "online") return Scenario::online;
  throw Error(Errc::invalid_argument, "unknown scenario '" + std::string(text) + "'");
}

namespace {

Stat stat_of(std::span<const tls::HandshakeRecord> records, double (*field)(const tls::HandshakeRecord&)) {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(field(r));
  return mean_sem(v);
}

Stat ratio_of(const Stat& a, const Stat& b) {
  if (!(b.mean > 0.0)) return {};
  if (a.mean == 0.0) return {0.0, a.sem / b.mean};
  return {a.mean / b.mean, propagate_ratio_error(a.mean, a.sem, b.mean, b.sem)};
}

// Wraps startup failures so the diagnostic names the component.
template <class F>
auto start(std::string_view component, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw Error(Errc::startup, std::string(component) + ": " + e.what());
  }
}

}  // namespace

ReportRow summarize(const std::string& kem, const std::string& dsa, Scenario scenario,
                    std::span<const tls::HandshakeRecord> records) {
  ReportRow row;
  row.kem = kem;
  row.dsa = dsa;
  row.scenario = scenario;
  row.repetitions = static_cast<std::uint32_t>(records.size());
  std::vector<tls::HandshakeRecord> ok;
  bool refused = false;
  for (const auto& r : records) {
    if (r.success) {
      ok.push_back(r);
    } else if (r.error.find(to_string(Errc::entropy_unavailable)) != std::string::npos) {
      refused = true;
    }
  }
  row.successes = static_cast<std::uint32_t>(ok.size());
  if (ok.empty()) {
    row.fail_closed = refused;
    return row;
  }
  row.t_handshake_ms = stat_of(ok, [](const tls::HandshakeRecord& r) { return r.t_handshake_ms; });
  row.t_eaas_ms = stat_of(ok, [](const tls::HandshakeRecord& r) { return r.t_eaas_ms; });
  row.t_gen_us = stat_of(ok, [](const tls::HandshakeRecord& r) { return r.t_gen_us; });
  row.bytes_c2s = stat_of(ok, [](const tls::HandshakeRecord& r) { return static_cast<double>(r.bytes_c2s); });
  row.bytes_s2c = stat_of(ok, [](const tls::HandshakeRecord& r) { return static_cast<double>(r.bytes_s2c); });
  row.packets_total = stat_of(
      ok, [](const tls::HandshakeRecord& r) { return static_cast<double>(r.packets_c2s + r.packets_s2c); });
  row.eaas_overhead_ratio = ratio_of(row.t_eaas_ms, row.t_handshake_ms);
  row.qrng_fraction = ratio_of({row.t_gen_us.mean / 1000.0, row.t_gen_us.sem / 1000.0}, row.t_handshake_ms);
  return row;
}

bool UseCaseResult::all_succeeded() const noexcept {
  for (const auto& per_kem : records) {
    for (const auto& r : per_kem) {
      if (!r.success) return false;
    }
  }
  return !records.empty();
}

std::uint64_t UseCaseResult::random_bytes_consumed() const noexcept {
  std::uint64_t total = 0;
  for (const auto& per_kem : records) {
    for (const auto& r : per_kem) total += r.random_bytes_consumed;
  }
  return total;
}

UseCaseResult run_scenario(const ExperimentConfig& config, Scenario scenario) {
  const auto catalog = start("catalog", [&] { return pqc::Catalog::load(config.catalog_path); });
  config.validate(catalog);
  const auto& dsa = catalog.dsa(config.dsa);

  auto device = start("entropy device", [&] { return std::make_shared<entropy::EntropyDevice>(config.device); });
  protocol::ServeConfig sc;
  sc.h_min = config.eaas.h_min;
  sc.listen = config.eaas.listen;
  sc.metrics_listen = config.eaas.metrics;
  sc.link = config.eaas.link;
  sc.link_seed = config.seed;
  auto eaas = start("eaas service", [&] { return protocol::serve(sc, device); });

  // Provisioning randomness stays off the measured path, so that a
  // degraded device still yields a report instead of a setup failure.
  pqc::PrngEntropySource prng(config.seed);
  const std::string root_name = scenario == Scenario::local ? "eaas-local-root" : "remote-server-root";
  auto ca = start("pki", [&] { return pki::create_root_ca(dsa, root_name, prng); });
  const auto server_key = pqc::dsa_keygen(dsa, prng);
  tls::Identity server_id{{pki::issue_certificate(ca, "tls-server", server_key.pk, prng), ca.root_cert},
                          server_key.sk};
  std::optional<tls::Identity> client_id;
  if (config.mutual_auth) {
    const auto client_key = pqc::dsa_keygen(dsa, prng);
    client_id = tls::Identity{{pki::issue_certificate(ca, "tls-client", client_key.pk, prng), ca.root_cert},
                              client_key.sk};
  }

  std::vector<std::unique_ptr<tls::TlsServer>> servers;
  for (const auto& kem : config.kem_list) {
    tls::TlsServerConfig tc;
    tc.kem = kem;
    tc.identity = server_id;
    tc.eaas = eaas->endpoint();
    if (config.mutual_auth) tc.client_root = ca.root_cert;
    servers.push_back(start("tls server " + kem, [&] { return std::make_unique<tls::TlsServer>(catalog, tc); }));
  }

  const auto& client_net = scenario == Scenario::local ? config.net_local : config.net_remote;
  UseCaseResult result;
  result.records.resize(config.kem_list.size());
  const auto run_kem = [&](std::size_t k) {
    protocol::EaasClient entropy(eaas->endpoint());
    net::DelaySampler sampler(client_net, config.seed * 7919 + k);
    tls::ClientConfig cc;
    cc.server = servers[k]->endpoint();
    cc.kem = config.kem_list[k];
    cc.mode = config.mode;
    cc.net = client_net;
    cc.trusted_root = ca.root_cert;
    cc.identity = client_id;
    for (int i = 0; i < config.repetitions; ++i) {
      result.records[k].push_back(tls::run_handshake(catalog, cc, entropy, sampler));
    }
  };
  if (config.parallel) {
    std::vector<std::thread> workers;
    for (std::size_t k = 0; k < config.kem_list.size(); ++k) workers.emplace_back(run_kem, k);
    for (auto& w : workers) w.join();
  } else {
    for (std::size_t k = 0; k < config.kem_list.size(); ++k) run_kem(k);
  }

  for (auto& s : servers) s->stop();
  result.eaas = eaas->counters();
  eaas->stop();
  for (std::size_t k = 0; k < config.kem_list.size(); ++k) {
    result.rows.push_back(summarize(config.kem_list[k], config.dsa, scenario, result.records[k]));
  }
  return result;
}

UseCaseResult run_usecase1(const ExperimentConfig& config) { return run_scenario(config, Scenario::local); }

UseCaseResult run_usecase2(const ExperimentConfig& config) { return run_scenario(config, Scenario::online); }

}  // namespace eaas::experiment
