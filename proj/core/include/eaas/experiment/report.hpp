#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eaas/experiment/runner.hpp"
#include "eaas/pqc/catalog.hpp"
#include "eaas/tls/messages.hpp"

namespace eaas::experiment {

enum class ReportFormat { csv, json };
ReportFormat parse_format(std::string_view text);

// Column order of the CSV report. Every Stat column is a _mean/_sem pair;
// the two ratios are value/_err pairs.
inline constexpr std::string_view kCsvHeader =
    "kem,dsa,scenario,repetitions,successes,"
    "t_handshake_ms_mean,t_handshake_ms_sem,t_eaas_ms_mean,t_eaas_ms_sem,"
    "t_gen_us_mean,t_gen_us_sem,bytes_c2s_mean,bytes_c2s_sem,bytes_s2c_mean,bytes_s2c_sem,"
    "packets_total_mean,packets_total_sem,eaas_overhead_ratio,eaas_overhead_ratio_err,"
    "qrng_fraction,qrng_fraction_err,fail_closed";

inline constexpr std::string_view kFig3Header = "kem,scenario,ratio,error";
inline constexpr std::string_view kFig4Header = "kem,dsa,scenario,bytes_c2s,bytes_s2c,bytes_total";

// Four significant digits; plain notation for magnitudes in [1e-3, 1e6).
std::string format_sig4(double value);

std::string render_csv(std::span<const ReportRow> rows);
// Full precision, so that rows_from_json(render_json(r)) == r.
std::string render_json(std::span<const ReportRow> rows);
std::vector<ReportRow> rows_from_json(std::string_view text);

std::string render_fig3(std::span<const ReportRow> rows);
std::string render_fig4(std::span<const ReportRow> rows);

struct EmittedReport {
  std::filesystem::path report;
  std::filesystem::path fig3;
  std::filesystem::path fig4;
};

// Writes <stem>.csv or <stem>.json plus <stem>_fig3.csv and <stem>_fig4.csv
// into output_dir, creating it if needed.
EmittedReport emit_report(std::span<const ReportRow> rows, ReportFormat format,
                          const std::filesystem::path& output_dir, const std::string& stem = "report");

// Predicted handshake bytes per direction for every (kem, dsa) pair, with
// a two-level chain per DSA.
struct BandwidthRow {
  std::string kem;
  std::string dsa;
  std::size_t bytes_c2s = 0;
  std::size_t bytes_s2c = 0;
};

std::vector<BandwidthRow> bandwidth_grid(const pqc::Catalog& catalog, std::span<const std::string> kems,
                                         std::span<const std::string> dsas, tls::KeyExchangeMode mode);
std::string render_bandwidth_csv(std::span<const BandwidthRow> rows);

}  // namespace eaas::experiment
