#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eaas/experiment/config.hpp"
#include "eaas/experiment/stats.hpp"
#include "eaas/protocol/server.hpp"
#include "eaas/tls/handshake.hpp"

namespace eaas::experiment {

enum class Scenario { local, online };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view text);

// Aggregate over the successful handshakes of one (kem, dsa, scenario).
struct ReportRow {
  std::string kem;
  std::string dsa;
  Scenario scenario = Scenario::local;
  std::uint32_t repetitions = 0;
  std::uint32_t successes = 0;
  Stat t_handshake_ms;
  Stat t_eaas_ms;
  Stat t_gen_us;
  Stat bytes_c2s;
  Stat bytes_s2c;
  Stat packets_total;
  Stat eaas_overhead_ratio;  // mean t_eaas / mean t_handshake, propagated error
  Stat qrng_fraction;
  // No handshake succeeded and the failures were entropy refusals.
  bool fail_closed = false;

  bool operator==(const ReportRow&) const = default;
};

ReportRow summarize(const std::string& kem, const std::string& dsa, Scenario scenario,
                    std::span<const tls::HandshakeRecord> records);

struct UseCaseResult {
  std::vector<ReportRow> rows;
  std::vector<std::vector<tls::HandshakeRecord>> records;  // per KEM, config order
  protocol::MetricsCounters eaas;                          // service counters after the run

  bool all_succeeded() const noexcept;
  std::uint64_t random_bytes_consumed() const noexcept;
};

// Use case 1: local private PKI, client-server link net_local.
UseCaseResult run_usecase1(const ExperimentConfig& config);
// Use case 2: emulated remote server with its own pre-provisioned root,
// client-server link net_remote.
UseCaseResult run_usecase2(const ExperimentConfig& config);

UseCaseResult run_scenario(const ExperimentConfig& config, Scenario scenario);

}  // namespace eaas::experiment
