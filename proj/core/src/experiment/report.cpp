#include "eaas/experiment/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "eaas/error.hpp"
#include "eaas/tls/bandwidth.hpp"

namespace eaas::experiment {

namespace {

using json = nlohmann::json;

json stat_to(const Stat& s) { return {{"mean", s.mean}, {"sem", s.sem}}; }
Stat stat_from(const json& j) { return {j.at("mean").get<double>(), j.at("sem").get<double>()}; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

}  // namespace

ReportFormat parse_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw Error(Errc::invalid_argument, "unknown report format '" + std::string(text) + "'");
}

std::string format_sig4(double value) {
  char buf[64];
  const double mag = std::fabs(value);
  if (value == 0.0) return "0";
  if (mag >= 1e-3 && mag < 1e6) {
    const int digits_before = static_cast<int>(std::floor(std::log10(mag))) + 1;
    const int decimals = std::max(0, 4 - digits_before);
    const double scale = std::pow(10.0, digits_before - 4);
    const double rounded = digits_before > 4 ? std::round(value / scale) * scale : value;
    std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  } else {
    std::snprintf(buf, sizeof buf, "%.3e", value);
  }
  return buf;
}

std::string render_csv(std::span<const ReportRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.kem + ',' + r.dsa + ',' + std::string(to_string(r.scenario)) + ',' + std::to_string(r.repetitions) +
           ',' + std::to_string(r.successes);
    for (const Stat* s : {&r.t_handshake_ms, &r.t_eaas_ms, &r.t_gen_us, &r.bytes_c2s, &r.bytes_s2c,
                          &r.packets_total, &r.eaas_overhead_ratio, &r.qrng_fraction}) {
      out += ',' + format_sig4(s->mean) + ',' + format_sig4(s->sem);
    }
    out += r.fail_closed ? ",true\n" : ",false\n";
  }
  return out;
}

std::string render_json(std::span<const ReportRow> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"kem", r.kem},
                   {"dsa", r.dsa},
                   {"scenario", std::string(to_string(r.scenario))},
                   {"repetitions", r.repetitions},
                   {"successes", r.successes},
                   {"t_handshake_ms", stat_to(r.t_handshake_ms)},
                   {"t_eaas_ms", stat_to(r.t_eaas_ms)},
                   {"t_gen_us", stat_to(r.t_gen_us)},
                   {"bytes_c2s", stat_to(r.bytes_c2s)},
                   {"bytes_s2c", stat_to(r.bytes_s2c)},
                   {"packets_total", stat_to(r.packets_total)},
                   {"eaas_overhead_ratio", stat_to(r.eaas_overhead_ratio)},
                   {"qrng_fraction", stat_to(r.qrng_fraction)},
                   {"fail_closed", r.fail_closed}});
  }
  return json{{"rows", arr}}.dump(2) + "\n";
}

std::vector<ReportRow> rows_from_json(std::string_view text) {
  std::vector<ReportRow> rows;
  try {
    const auto j = json::parse(text);
    for (const auto& e : j.at("rows")) {
      ReportRow r;
      r.kem = e.at("kem").get<std::string>();
      r.dsa = e.at("dsa").get<std::string>();
      r.scenario = parse_scenario(e.at("scenario").get<std::string>());
      r.repetitions = e.at("repetitions").get<std::uint32_t>();
      r.successes = e.at("successes").get<std::uint32_t>();
      r.t_handshake_ms = stat_from(e.at("t_handshake_ms"));
      r.t_eaas_ms = stat_from(e.at("t_eaas_ms"));
      r.t_gen_us = stat_from(e.at("t_gen_us"));
      r.bytes_c2s = stat_from(e.at("bytes_c2s"));
      r.bytes_s2c = stat_from(e.at("bytes_s2c"));
      r.packets_total = stat_from(e.at("packets_total"));
      r.eaas_overhead_ratio = stat_from(e.at("eaas_overhead_ratio"));
      r.qrng_fraction = stat_from(e.at("qrng_fraction"));
      r.fail_closed = e.at("fail_closed").get<bool>();
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("report: ") + e.what());
  }
  return rows;
}

std::string render_fig3(std::span<const ReportRow> rows) {
  std::string out(kFig3Header);
  out += '\n';
  for (const auto& r : rows) {
    out += r.kem + ',' + std::string(to_string(r.scenario)) + ',' + format_sig4(r.eaas_overhead_ratio.mean) + ',' +
           format_sig4(r.eaas_overhead_ratio.sem) + '\n';
  }
  return out;
}

std::string render_fig4(std::span<const ReportRow> rows) {
  std::string out(kFig4Header);
  out += '\n';
  for (const auto& r : rows) {
    out += r.kem + ',' + r.dsa + ',' + std::string(to_string(r.scenario)) + ',' + format_sig4(r.bytes_c2s.mean) +
           ',' + format_sig4(r.bytes_s2c.mean) + ',' + format_sig4(r.bytes_c2s.mean + r.bytes_s2c.mean) + '\n';
  }
  return out;
}

EmittedReport emit_report(std::span<const ReportRow> rows, ReportFormat format,
                          const std::filesystem::path& output_dir, const std::string& stem) {
  if (rows.empty()) throw Error(Errc::invalid_argument, "no rows to report");
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create " + output_dir.string() + ": " + ec.message());
  EmittedReport out;
  out.report = output_dir / (stem + (format == ReportFormat::csv ? ".csv" : ".json"));
  out.fig3 = output_dir / (stem + "_fig3.csv");
  out.fig4 = output_dir / (stem + "_fig4.csv");
  write_text(out.report, format == ReportFormat::csv ? render_csv(rows) : render_json(rows));
  write_text(out.fig3, render_fig3(rows));
  write_text(out.fig4, render_fig4(rows));
  return out;
}

std::vector<BandwidthRow> bandwidth_grid(const pqc::Catalog& catalog, std::span<const std::string> kems,
                                         std::span<const std::string> dsas, tls::KeyExchangeMode mode) {
  std::vector<BandwidthRow> rows;
  for (const auto& d : dsas) {
    const auto& dsa = catalog.dsa(d);
    const auto chain = tls::two_level_chain_sizes(dsa, "tls-server", "remote-server-root");
    for (const auto& k : kems) {
      tls::HandshakeShape shape;
      shape.kem = &catalog.kem(k);
      shape.dsa = &dsa;
      shape.mode = mode;
      shape.server_chain = chain;
      const auto b = tls::predict_breakdown(shape);
      rows.push_back({k, d, b.c2s_total(), b.s2c_total()});
    }
  }
  return rows;
}

std::string render_bandwidth_csv(std::span<const BandwidthRow> rows) {
  std::string out = "kem,dsa,bytes_c2s,bytes_s2c,bytes_total\n";
  for (const auto& r : rows) {
    out += r.kem + ',' + r.dsa + ',' + std::to_string(r.bytes_c2s) + ',' + std::to_string(r.bytes_s2c) + ',' +
           std::to_string(r.bytes_c2s + r.bytes_s2c) + '\n';
  }
  return out;
}

}  // namespace eaas::experiment
