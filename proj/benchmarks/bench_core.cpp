#include <benchmark/benchmark.h>

#include "eaas/bits.hpp"
#include "eaas/entropy/device.hpp"
#include "eaas/entropy/quality.hpp"
#include "eaas/pqc/catalog.hpp"
#include "eaas/pqc/dsa.hpp"
#include "eaas/pqc/kem.hpp"
#include "eaas/pqc/xof.hpp"
#include "eaas/protocol/frame.hpp"
#include "eaas/tls/bandwidth.hpp"

using namespace eaas;

namespace {

const pqc::Catalog& catalog() {
  static const pqc::Catalog c = pqc::Catalog::load(pqc::default_catalog_path());
  return c;
}

std::vector<std::uint8_t> random_bytes(std::size_t n) {
  entropy::DeviceModel m;
  m.window_bits = 8;
  entropy::EntropyDevice dev(m);
  return dev.generate(n).data;
}

void BM_MinEntropyEstimate(benchmark::State& state) {
  const auto data = random_bytes(static_cast<std::size_t>(state.range(0)) / 8);
  for (auto _ : state) benchmark::DoNotOptimize(entropy::estimate_min_entropy(BitSpan(data)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MinEntropyEstimate)->Arg(256)->Arg(1 << 20);

void BM_HealthCheck(benchmark::State& state) {
  const auto data = random_bytes(static_cast<std::size_t>(state.range(0)) / 8);
  for (auto _ : state) benchmark::DoNotOptimize(entropy::health_check(BitSpan(data), 0.93));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HealthCheck)->Arg(256)->Arg(1 << 20);

void BM_DeviceGenerate(benchmark::State& state) {
  entropy::DeviceModel m;
  m.p_one = 0.5248583418115336;
  entropy::EntropyDevice dev(m);
  for (auto _ : state) benchmark::DoNotOptimize(dev.generate(static_cast<std::size_t>(state.range(0))));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DeviceGenerate)->Arg(32)->Arg(4096);

void BM_Xof(benchmark::State& state) {
  const std::vector<std::uint8_t> input(64, 0x5a);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pqc::xof({input}, n));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Xof)->Arg(32)->Arg(16384);

void BM_FrameRoundTrip(benchmark::State& state) {
  protocol::EntropyResponse resp;
  resp.req_id = "bench";
  resp.device_id = "qrng0";
  resp.data = random_bytes(static_cast<std::size_t>(state.range(0)));
  const protocol::Message msg = resp;
  for (auto _ : state) benchmark::DoNotOptimize(protocol::decode_frame(protocol::encode_frame(msg)));
}
BENCHMARK(BM_FrameRoundTrip)->Arg(32)->Arg(65536);

void BM_KemRoundTrip(benchmark::State& state, const char* name) {
  const auto& kem = catalog().kem(name);
  pqc::PrngEntropySource src(1);
  for (auto _ : state) {
    const auto kp = pqc::kem_keygen(kem, src);
    const auto enc = pqc::kem_encapsulate(kem, kp.pk, src);
    benchmark::DoNotOptimize(pqc::kem_decapsulate(kem, kp.sk, enc.ct));
  }
}
BENCHMARK_CAPTURE(BM_KemRoundTrip, kyber768, "kyber768");
BENCHMARK_CAPTURE(BM_KemRoundTrip, p384_frodo976aes, "p384_frodo976aes");

void BM_DsaSignVerify(benchmark::State& state, const char* name) {
  const auto& dsa = catalog().dsa(name);
  pqc::PrngEntropySource src(1);
  const auto kp = pqc::dsa_keygen(dsa, src);
  const std::vector<std::uint8_t> msg(32, 1);
  for (auto _ : state) {
    const auto sig = pqc::dsa_sign(dsa, kp.sk, msg, src);
    benchmark::DoNotOptimize(pqc::dsa_verify(dsa, kp.pk, msg, sig));
  }
}
BENCHMARK_CAPTURE(BM_DsaSignVerify, p384_dilithium3, "p384_dilithium3");
BENCHMARK_CAPTURE(BM_DsaSignVerify, p384_sphincssha2192fsimple, "p384_sphincssha2192fsimple");

void BM_PredictBreakdown(benchmark::State& state) {
  tls::HandshakeShape shape;
  shape.kem = &catalog().kem("p384_kyber768");
  shape.dsa = &catalog().dsa("p384_dilithium3");
  shape.server_chain = tls::two_level_chain_sizes(*shape.dsa, "tls-server", "root");
  for (auto _ : state) benchmark::DoNotOptimize(tls::predict_breakdown(shape));
}
BENCHMARK(BM_PredictBreakdown);

}  // namespace
BENCHMARK_MAIN();
