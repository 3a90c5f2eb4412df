// Runs every acceptance criterion against its tolerance and time limit and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eaas/bits.hpp"
#include "eaas/entropy/device.hpp"
#include "eaas/entropy/quality.hpp"
#include "eaas/error.hpp"
#include "eaas/experiment/runner.hpp"
#include "eaas/pki/certificate.hpp"
#include "eaas/pqc/dsa.hpp"
#include "eaas/pqc/kem.hpp"
#include "eaas/protocol/client.hpp"
#include "eaas/protocol/server.hpp"
#include "eaas/tls/handshake.hpp"

using namespace eaas;

namespace {

constexpr double kNominalP = 0.5248583418115336;  // 2^-0.93

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      pass = false;
      detail << what << "; ";
    }
  }
};

const pqc::Catalog& catalog() {
  static const pqc::Catalog c = pqc::Catalog::load(pqc::default_catalog_path());
  return c;
}

std::unique_ptr<protocol::EaasServer> start_eaas(double p_one = kNominalP) {
  entropy::DeviceModel m;
  m.p_one = p_one;
  return protocol::serve({}, std::make_shared<entropy::EntropyDevice>(m));
}

struct Provisioned {
  pki::Certificate root;
  tls::Identity server;
};

Provisioned provision(const std::string& dsa_name) {
  pqc::PrngEntropySource prng(1);
  const auto& dsa = catalog().dsa(dsa_name);
  auto ca = pki::create_root_ca(dsa, "acceptance-root", prng);
  const auto key = pqc::dsa_keygen(dsa, prng);
  return {ca.root_cert, {{pki::issue_certificate(ca, "tls-server", key.pk, prng), ca.root_cert}, key.sk}};
}

tls::HandshakeRecord handshake(protocol::EaasServer& eaas, const Provisioned& pki, const std::string& kem,
                               tls::KeyExchangeMode mode) {
  tls::TlsServerConfig sc;
  sc.kem = kem;
  sc.identity = pki.server;
  sc.eaas = eaas.endpoint();
  tls::TlsServer server(catalog(), sc);
  tls::ClientConfig cc;
  cc.server = server.endpoint();
  cc.kem = kem;
  cc.mode = mode;
  cc.trusted_root = pki.root;
  protocol::EaasClient client(eaas.endpoint());
  net::DelaySampler sampler(cc.net, 1);
  return tls::run_handshake(catalog(), cc, client, sampler);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// 1. Encapsulation randomness debited from the EaaS counter, per KEM.
void randomness_demand(Outcome& out) {
  auto eaas = start_eaas();
  protocol::EaasClient client(eaas->endpoint());
  for (const auto& [name, expected] : std::map<std::string, std::uint64_t>{
           {"kyber768", 32}, {"bikel3", 64}, {"hqc192", 24}, {"frodo976aes", 24}, {"frodo976shake", 24}}) {
    const auto& kem = catalog().kem(name);
    pqc::PrngEntropySource local(7);
    const auto kp = pqc::kem_keygen(kem, local);
    protocol::EaasEntropySource source(client);
    const auto before = eaas->counters().bytes_served_total;
    pqc::kem_encapsulate(kem, kp.pk, source);
    const auto debited = eaas->counters().bytes_served_total - before;
    out.detail << name << "=" << debited << " ";
    out.require(debited == expected, name + " expected " + std::to_string(expected));
  }
}

experiment::ExperimentConfig default_config() {
  experiment::ExperimentConfig c;
  c.device.p_one = kNominalP;
  return c;
}

// 2. QRNG share of the handshake under the default profile.
void qrng_overhead(Outcome& out) {
  const auto result = experiment::run_usecase1(default_config());
  out.require(result.all_succeeded(), "some handshakes failed");
  for (const auto& row : result.rows) {
    const double f = row.qrng_fraction.mean;
    out.detail << row.kem << "=" << fmt(f) << " (t_hs " << fmt(row.t_handshake_ms.mean) << " ms) ";
    out.require(f >= 1e-6 && f <= 3e-5, row.kem + " qrng_fraction outside [1e-6, 3e-5]");
    out.require(row.t_handshake_ms.mean >= 60 && row.t_handshake_ms.mean <= 250,
                row.kem + " handshake mean outside 60-250 ms");
  }
}

// 3. Overhead ratio bands, local versus online.
void overhead_bands(Outcome& out) {
  const auto cfg = default_config();
  const auto local = experiment::run_usecase1(cfg);
  const auto online = experiment::run_usecase2(cfg);
  out.require(local.all_succeeded() && online.all_succeeded(), "some handshakes failed");
  double best_online = 1.0;
  for (std::size_t i = 0; i < local.rows.size() && i < online.rows.size(); ++i) {
    const double l = local.rows[i].eaas_overhead_ratio.mean;
    const double o = online.rows[i].eaas_overhead_ratio.mean;
    best_online = std::min(best_online, o);
    out.detail << local.rows[i].kem << " local=" << fmt(l) << " online=" << fmt(o) << " ";
    out.require(l < 0.32, local.rows[i].kem + " local ratio not below 0.32");
    out.require(o < l, local.rows[i].kem + " online ratio not below local");
  }
  out.require(best_online <= 0.15, "no online ratio at or below 0.15");
}

// 4. Bandwidth deltas at security level 3, predicted and measured.
void bandwidth_deltas(Outcome& out) {
  auto eaas = start_eaas();
  const auto mode = tls::KeyExchangeMode::client_encapsulates;
  struct Sizes {
    double predicted_s2c, measured_s2c, predicted_total, measured_total;
  };
  std::map<std::pair<std::string, std::string>, Sizes> cache;
  const auto sizes = [&](const std::string& kem, const std::string& dsa) {
    const auto key = std::make_pair(kem, dsa);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const auto pki = provision(dsa);
    const auto predicted = tls::predict_breakdown(tls::shape_for(catalog(), kem, mode, pki.server.chain));
    const auto rec = handshake(*eaas, pki, kem, mode);
    out.require(rec.success, kem + "/" + dsa + " handshake failed: " + rec.error);
    Sizes s{static_cast<double>(predicted.s2c_total()), static_cast<double>(rec.bytes_s2c),
            static_cast<double>(predicted.total()), static_cast<double>(rec.bytes_c2s + rec.bytes_s2c)};
    cache.emplace(key, s);
    return s;
  };
  const auto base = sizes("kyber768", "p384");
  const auto dil = sizes("kyber768", "p384_dilithium3");
  const auto sph = sizes("kyber768", "p384_sphincssha2192fsimple");
  const auto frodo = sizes("frodo976aes", "p384_dilithium3");
  for (bool measured : {false, true}) {
    const char* tag = measured ? "measured" : "predicted";
    const auto s2c = [&](const Sizes& s) { return measured ? s.measured_s2c : s.predicted_s2c; };
    const auto total = [&](const Sizes& s) { return measured ? s.measured_total : s.predicted_total; };
    const double d_dil = s2c(dil) - s2c(base);
    const double d_sph = s2c(sph) - s2c(base);
    const double d_kem = total(frodo) - total(dil);
    out.detail << tag << ": dilithium3=" << d_dil << " sphincs=" << d_sph << " frodo-kyber=" << d_kem << " ";
    out.require(d_dil > 10'000, std::string(tag) + " dilithium3 delta not above 10 kB");
    out.require(d_sph > 70'000, std::string(tag) + " sphincs delta not above 70 kB");
    out.require(std::abs(d_kem - 28'000) <= 2'000, std::string(tag) + " frodo-kyber delta outside 28 +- 2 kB");
  }
}

// 5. Estimator calibration on 10^6 bits.
void entropy_calibration(Outcome& out) {
  const auto estimate = [](double p_one, std::uint64_t seed) {
    entropy::DeviceModel m;
    m.p_one = p_one;
    m.seed = seed;
    entropy::EntropyDevice dev(m);
    const auto block = dev.generate(125'000);
    return entropy::estimate_min_entropy(BitSpan(block.data)).value;
  };
  const double biased = estimate(kNominalP, entropy::DeviceModel{}.seed);
  const std::vector<std::uint8_t> constant(125'000, 0xFF);
  const double flat = entropy::estimate_min_entropy(BitSpan(constant)).value;
  const double uniform = estimate(0.5, entropy::DeviceModel{}.seed);
  out.detail << "p=2^-0.93: " << fmt(biased) << ", constant: " << flat << ", uniform: " << fmt(uniform);
  int above = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) above += estimate(0.5, 1000 + s) >= 0.995 ? 1 : 0;
  out.detail << " (uniform >= 0.995 in " << above << "/20 further seeds)";
  out.require(biased >= 0.91 && biased <= 0.95, "biased estimate outside [0.91, 0.95]");
  out.require(flat == 0.0, "constant source not 0");
  out.require(uniform >= 0.995, "uniform estimate below 0.995");
}

// 6. Degraded device: nothing succeeds and nothing is delivered.
void fail_closed(Outcome& out) {
  auto cfg = default_config();
  cfg.device.p_one = 0.7;  // H = 0.515, below the 0.9 threshold
  cfg.repetitions = 3;
  for (const auto mode : {tls::KeyExchangeMode::client_encapsulates, tls::KeyExchangeMode::server_encapsulates}) {
    cfg.mode = mode;
    const auto result = experiment::run_usecase1(cfg);
    std::uint64_t successes = 0;
    for (const auto& row : result.rows) {
      successes += row.successes;
      out.require(row.fail_closed, row.kem + " not flagged fail-closed");
    }
    out.detail << tls::to_string(mode) << ": successes=" << successes
               << " served=" << result.eaas.bytes_served_total
               << " refused=" << result.eaas.below_threshold_total << " ";
    out.require(successes == 0, "handshakes succeeded on a degraded device");
    out.require(result.eaas.bytes_served_total == 0, "entropy bytes were delivered");
  }
  // Direct requests are refused with no data.
  auto eaas = start_eaas(0.7);
  protocol::EaasClient client(eaas->endpoint());
  try {
    client.fetch(32);
    out.require(false, "direct fetch returned data");
  } catch (const Error& e) {
    out.require(e.code() == Errc::entropy_unavailable, std::string("unexpected error ") + e.what());
  }
  out.require(eaas->counters().bytes_served_total == 0, "direct fetch delivered bytes");
}

bool verifies(pqc::ByteView encoded, const pki::Certificate& root) {
  try {
    return pki::verify_chain(catalog(), pki::Certificate::decode(encoded), root);
  } catch (const Error&) {
    return false;
  }
}

// 7. Mock primitives round-trip, and single-bit mutations are caught.
void mock_crypto(Outcome& out) {
  std::mt19937_64 rng(2024);
  const auto flip = [&](pqc::Bytes b) {
    const auto bit = rng() % (b.size() * 8);
    b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    return b;
  };
  std::size_t kem_trials = 0, dsa_trials = 0;
  for (const auto& name : catalog().names(pqc::Kind::kem)) {
    const auto& kem = catalog().kem(name);
    for (int t = 0; t < 100; ++t, ++kem_trials) {
      pqc::PrngEntropySource src(rng());
      const auto kp = pqc::kem_keygen(kem, src);
      const auto enc = pqc::kem_encapsulate(kem, kp.pk, src);
      out.require(pqc::kem_decapsulate(kem, kp.sk, enc.ct) == enc.ss, name + " round trip");
      out.require(pqc::kem_decapsulate(kem, kp.sk, flip(enc.ct)) != enc.ss, name + " ct mutation undetected");
    }
  }
  for (const auto& name : catalog().names(pqc::Kind::dsa)) {
    const auto& dsa = catalog().dsa(name);
    pqc::PrngEntropySource ca_src(rng());
    auto ca = pki::create_root_ca(dsa, "root", ca_src);
    for (int t = 0; t < 100; ++t, ++dsa_trials) {
      pqc::PrngEntropySource src(rng());
      const auto kp = pqc::dsa_keygen(dsa, src);
      const auto msg = src.draw(64);
      const auto sig = pqc::dsa_sign(dsa, kp.sk, msg, src);
      out.require(pqc::dsa_verify(dsa, kp.pk, msg, sig), name + " sign/verify");
      out.require(!pqc::dsa_verify(dsa, kp.pk, msg, flip(sig)), name + " sig mutation undetected");
      const auto cert = pki::issue_certificate(ca, "leaf", kp.pk, src).encode();
      out.require(verifies(cert, ca.root_cert), name + " certificate chain");
      out.require(!verifies(flip(cert), ca.root_cert), name + " cert mutation undetected");
    }
  }
  out.detail << kem_trials << " KEM and " << dsa_trials << " DSA trials";
}

// 8. Measured bytes per direction equal the prediction, for every
// (kem, dsa, mode).
void measured_vs_predicted(Outcome& out) {
  auto eaas = start_eaas();
  std::size_t cases = 0;
  for (const auto& dsa : catalog().names(pqc::Kind::dsa)) {
    const auto pki = provision(dsa);
    for (const auto& kem : catalog().names(pqc::Kind::kem)) {
      tls::TlsServerConfig sc;
      sc.kem = kem;
      sc.identity = pki.server;
      sc.eaas = eaas->endpoint();
      tls::TlsServer server(catalog(), sc);
      for (const auto mode : {tls::KeyExchangeMode::client_encapsulates, tls::KeyExchangeMode::server_encapsulates}) {
        tls::ClientConfig cc;
        cc.server = server.endpoint();
        cc.kem = kem;
        cc.mode = mode;
        cc.trusted_root = pki.root;
        protocol::EaasClient client(eaas->endpoint());
        net::DelaySampler sampler(cc.net, 1);
        const auto rec = tls::run_handshake(catalog(), cc, client, sampler);
        const auto predicted = tls::predict_breakdown(tls::shape_for(catalog(), kem, mode, pki.server.chain));
        const auto label = kem + "/" + dsa + "/" + std::string(tls::to_string(mode));
        out.require(rec.success, label + " failed: " + rec.error);
        out.require(rec.bytes_c2s == predicted.c2s_total() && rec.bytes_s2c == predicted.s2c_total(),
                    label + " byte mismatch");
        ++cases;
      }
    }
  }
  out.detail << cases << " combinations";
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "randomness demand per KEM", 1, randomness_demand},
      {2, "QRNG temporal overhead", 120, qrng_overhead},
      {3, "EaaS overhead bands", 300, overhead_bands},
      {4, "bandwidth deltas", 60, bandwidth_deltas},
      {5, "entropy calibration", 30, entropy_calibration},
      {6, "fail-closed", 30, fail_closed},
      {7, "mock-crypto correctness", 60, mock_crypto},
      {8, "measured vs predicted bandwidth", 120, measured_vs_predicted},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(s < c.limit_s, "exceeded " + fmt(c.limit_s) + " s limit");
    if (!out.pass) ++failures;
    std::printf("%s [%d] %s (%.2f s / %.0f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, s, c.limit_s,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
