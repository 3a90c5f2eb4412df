#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "eaas/error.hpp"
#include "eaas/experiment/config.hpp"
#include "eaas/experiment/report.hpp"
#include "eaas/experiment/runner.hpp"
#include "eaas/experiment/stats.hpp"

using namespace eaas;
using namespace eaas::experiment;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("eaas-exp-" + std::to_string(std::random_device{}()));
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Fast configuration: one KEM, short links.
ExperimentConfig small_config(int reps, double delay_ms = 1.0, double jitter_ms = 0.5) {
  ExperimentConfig c;
  c.device.p_one = 0.5248583418115336;
  c.kem_list = {"kyber768"};
  c.dsa = "p256";
  c.eaas.link = {delay_ms, jitter_ms, 1448};
  c.net_local = {delay_ms, jitter_ms, 1448};
  c.net_remote = {2 * delay_ms, jitter_ms, 1448};
  c.repetitions = reps;
  return c;
}

tls::HandshakeRecord record(double hs, double eaas_ms, double gen_us, bool ok = true) {
  tls::HandshakeRecord r;
  r.kem = "kyber768";
  r.dsa = "p256";
  r.t_handshake_ms = hs;
  r.t_eaas_ms = eaas_ms;
  r.t_gen_us = gen_us;
  r.bytes_c2s = 100;
  r.bytes_s2c = 200;
  r.packets_c2s = 2;
  r.packets_s2c = 3;
  r.success = ok;
  return r;
}

}  // namespace

TEST(Stats, OverheadRatioExamples) {
  EXPECT_DOUBLE_EQ(overhead_ratio(30, 100), 0.30);
  EXPECT_DOUBLE_EQ(overhead_ratio(0, 100), 0.0);
  EXPECT_NEAR(overhead_ratio(19.61, 196.1), 0.1, 1e-12);
  EXPECT_THROW(overhead_ratio(101, 100), Error);
  EXPECT_THROW(overhead_ratio(-1, 100), Error);
  EXPECT_THROW(overhead_ratio(0, 0), Error);
}

TEST(Stats, QrngFractionExamples) {
  EXPECT_NEAR(qrng_fraction(0.8827586206896552, 210.68), 4.19e-6, 0.01e-6);
  EXPECT_NEAR(qrng_fraction(0.6620689655172414, 67.627), 9.79e-6, 0.01e-6);
  EXPECT_NEAR(qrng_fraction(1.0, 1000.0), 1e-6, 1e-18);
  EXPECT_THROW(qrng_fraction(0.0, 10.0), Error);
  EXPECT_THROW(qrng_fraction(1.0, 0.0), Error);
}

TEST(Stats, ErrorPropagation) {
  EXPECT_NEAR(propagate_ratio_error(1, 0.01, 1, 0), 0.01, 1e-15);
  EXPECT_DOUBLE_EQ(propagate_ratio_error(1, 0, 1, 0), 0.0);
  EXPECT_NEAR(propagate_ratio_error(1, 0.01, 1, 0.01), 0.0141421356, 1e-9);
  EXPECT_NEAR(propagate_ratio_error(30, 3, 100, 0), 0.03, 1e-15);
}

TEST(Stats, MeanSem) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = mean_sem(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.sem, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(mean_sem(std::vector<double>{7}).sem, 0.0);
  EXPECT_THROW(mean_sem(std::vector<double>{}), Error);
}

TEST(Stats, WelchAgainstReference) {
  // Reference values from scipy.stats.ttest_ind(equal_var=False).
  const std::vector<double> a{27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4};
  const std::vector<double> b{27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.1, 22.9, 20.5, 24.4};
  const auto w = welch_t_test(a, b);
  EXPECT_NEAR(w.t, -2.46, 0.01);
  EXPECT_NEAR(w.dof, 24.99, 0.05);
  EXPECT_NEAR(w.p_value, 0.021, 0.001);
  EXPECT_THROW(welch_t_test(std::vector<double>{1}, b), Error);
}

TEST(Stats, WelchAcceptsSamplesFromOneDistribution) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(100, 5);
  int rejections = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(30), b(30);
    for (auto& x : a) x = d(rng);
    for (auto& x : b) x = d(rng);
    if (welch_t_test(a, b).p_value < 0.01) ++rejections;
  }
  EXPECT_LE(rejections, 8);
}

TEST(Summarize, AggregatesSuccessesOnly) {
  std::vector<tls::HandshakeRecord> recs{record(100, 30, 1), record(120, 34, 1), record(0, 0, 0, false)};
  recs.back().error = "transport: reset";
  const auto row = summarize("kyber768", "p256", Scenario::local, recs);
  EXPECT_EQ(row.repetitions, 3u);
  EXPECT_EQ(row.successes, 2u);
  EXPECT_DOUBLE_EQ(row.t_handshake_ms.mean, 110);
  EXPECT_DOUBLE_EQ(row.eaas_overhead_ratio.mean, 32.0 / 110.0);
  EXPECT_NEAR(row.qrng_fraction.mean, 1e-3 / 110.0, 1e-18);
  EXPECT_DOUBLE_EQ(row.packets_total.mean, 5);
  EXPECT_FALSE(row.fail_closed);

  std::vector<tls::HandshakeRecord> refused{record(0, 0, 0, false)};
  refused[0].error = "peer alert: entropy-unavailable: below threshold";
  EXPECT_TRUE(summarize("kyber768", "p256", Scenario::local, refused).fail_closed);
}

TEST(Config, JsonRoundTripAndDefaults) {
  ExperimentConfig c;
  c.repetitions = 12;
  c.kem_list = {"kyber768", "p384_hqc192"};
  c.mode = tls::KeyExchangeMode::server_encapsulates;
  c.eaas.h_min = 0.85;
  c.net_remote.jitter_ms = 3;
  c.device.p_one = 0.6;
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.repetitions, 12);
  EXPECT_EQ(back.kem_list, c.kem_list);
  EXPECT_EQ(back.mode, c.mode);
  EXPECT_EQ(back.eaas, c.eaas);
  EXPECT_EQ(back.net_remote, c.net_remote);
  EXPECT_EQ(back.device.p_one, 0.6);

  const auto d = config_from_json("{}");
  EXPECT_EQ(d.repetitions, 30);
  EXPECT_EQ(d.kem_list.size(), 5u);
  EXPECT_EQ(d.net_local.one_way_delay_ms, 40.0);
  EXPECT_EQ(d.eaas.link.one_way_delay_ms, 15.0);
}

TEST(Config, Validation) {
  const auto catalog = pqc::Catalog::load(pqc::default_catalog_path());
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate(catalog));
  c.repetitions = 1;
  EXPECT_THROW(c.validate(catalog), Error);
  c = {};
  c.kem_list = {"nope"};
  EXPECT_THROW(c.validate(catalog), Error);
  c = {};
  c.dsa = "kyber768";
  EXPECT_THROW(c.validate(catalog), Error);
  EXPECT_THROW(config_from_json("[1,2]"), Error);
  EXPECT_THROW(config_from_json("{\"repetitions\": \"many\"}"), Error);
}

TEST(Report, FourSignificantDigits) {
  EXPECT_EQ(format_sig4(0.123456), "0.1235");
  EXPECT_EQ(format_sig4(210.68), "210.7");
  EXPECT_EQ(format_sig4(29104), "29100");
  EXPECT_EQ(format_sig4(2.5e7), "2.500e+07");
  EXPECT_EQ(format_sig4(4.19e-6), "4.190e-06");
  EXPECT_EQ(format_sig4(0.0), "0");
}

TEST(Report, CsvJsonAndFigures) {
  std::vector<ReportRow> rows;
  for (const char* kem : {"a", "b", "c", "d", "e"}) {
    std::vector<tls::HandshakeRecord> recs{record(100, 30, 1), record(110, 31, 1)};
    rows.push_back(summarize(kem, "p256", Scenario::online, recs));
  }
  const auto csv = lines(render_csv(rows));
  ASSERT_EQ(csv.size(), 6u);
  EXPECT_EQ(csv[0], kCsvHeader);
  EXPECT_EQ(csv[1].rfind("a,p256,online,2,2,", 0), 0u) << csv[1];
  const auto cols = std::count(csv[0].begin(), csv[0].end(), ',');
  for (const auto& l : csv) EXPECT_EQ(std::count(l.begin(), l.end(), ','), cols);

  EXPECT_EQ(rows_from_json(render_json(rows)), rows);

  TempDir dir;
  const auto out = emit_report(rows, ReportFormat::csv, dir.path, "usecase2");
  EXPECT_EQ(out.report.filename(), "usecase2.csv");
  const auto fig3 = lines(slurp(out.fig3));
  ASSERT_EQ(fig3.size(), 6u);
  EXPECT_EQ(fig3[0], kFig3Header);
  const auto fig4 = lines(slurp(out.fig4));
  ASSERT_EQ(fig4.size(), 6u);
  EXPECT_EQ(fig4[0], kFig4Header);
  EXPECT_EQ(fig4[1], "a,p256,online,100.0,200.0,300.0");

  const auto js = emit_report(rows, ReportFormat::json, dir.path, "usecase2");
  EXPECT_EQ(rows_from_json(slurp(js.report)), rows);
  EXPECT_THROW(emit_report(std::vector<ReportRow>{}, ReportFormat::csv, dir.path), Error);
  EXPECT_THROW(parse_format("xml"), Error);
}

TEST(Report, BandwidthGrid) {
  const auto catalog = pqc::Catalog::load(pqc::default_catalog_path());
  const std::vector<std::string> kems{"kyber768", "frodo976aes"};
  const std::vector<std::string> dsas{"p256", "p384_dilithium3"};
  const auto grid = bandwidth_grid(catalog, kems, dsas, tls::KeyExchangeMode::client_encapsulates);
  ASSERT_EQ(grid.size(), 4u);
  const auto csv = lines(render_bandwidth_csv(grid));
  EXPECT_EQ(csv.size(), 5u);
  for (const auto& r : grid) EXPECT_GT(r.bytes_s2c, r.bytes_c2s);
}

TEST(Runner, SmallUseCaseSucceeds) {
  const auto result = run_usecase1(small_config(3));
  ASSERT_TRUE(result.all_succeeded());
  ASSERT_EQ(result.rows.size(), 1u);
  const auto& row = result.rows[0];
  EXPECT_EQ(row.successes, 3u);
  EXPECT_EQ(row.scenario, Scenario::local);
  EXPECT_GT(row.eaas_overhead_ratio.mean, 0.0);
  EXPECT_LT(row.eaas_overhead_ratio.mean, 1.0);
  EXPECT_EQ(result.eaas.bytes_served_total, result.random_bytes_consumed());
  EXPECT_EQ(result.random_bytes_consumed(), 3u * 64u);
}

TEST(Runner, OnlineUseCaseSucceeds) {
  const auto result = run_usecase2(small_config(2));
  ASSERT_TRUE(result.all_succeeded());
  EXPECT_EQ(result.rows[0].scenario, Scenario::online);
}

TEST(Runner, FailsClosedBelowThreshold) {
  auto c = small_config(3);
  c.device.p_one = 0.7;
  const auto result = run_usecase1(c);
  EXPECT_FALSE(result.all_succeeded());
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].successes, 0u);
  EXPECT_TRUE(result.rows[0].fail_closed);
  EXPECT_EQ(result.eaas.bytes_served_total, 0u);
  EXPECT_GT(result.eaas.below_threshold_total, 0u);
}

TEST(Runner, StartupErrorsNameTheComponent) {
  auto c = small_config(2);
  c.catalog_path = "/nonexistent/catalog.json";
  try {
    run_usecase1(c);
    FAIL() << "expected a startup error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::startup);
    EXPECT_NE(std::string(e.what()).find("catalog"), std::string::npos);
  }
}

TEST(Runner, StandardErrorShrinksWithRepetitions) {
  std::vector<double> sems;
  for (int reps : {10, 40, 160}) {
    const auto result = run_usecase1(small_config(reps, 1.0, 1.0));
    ASSERT_TRUE(result.all_succeeded());
    sems.push_back(result.rows[0].t_handshake_ms.sem);
  }
  EXPECT_GT(sems[0], sems[2]);
  EXPECT_GT(sems[1], sems[2]);
}

TEST(Runner, ZeroJitterIsReproducible) {
  const auto a = run_usecase1(small_config(5, 2.0, 0.0));
  const auto b = run_usecase1(small_config(5, 2.0, 0.0));
  ASSERT_TRUE(a.all_succeeded());
  ASSERT_TRUE(b.all_succeeded());
  EXPECT_EQ(a.rows[0].bytes_c2s, b.rows[0].bytes_c2s);
  EXPECT_EQ(a.rows[0].bytes_s2c, b.rows[0].bytes_s2c);
  EXPECT_EQ(a.rows[0].packets_total, b.rows[0].packets_total);
  EXPECT_EQ(a.random_bytes_consumed(), b.random_bytes_consumed());
  EXPECT_NEAR(a.rows[0].t_handshake_ms.mean, b.rows[0].t_handshake_ms.mean, 5.0);
}

TEST(Runner, IdenticalConfigsAreStatisticallyIndistinguishable) {
  const auto cfg = small_config(30, 3.0, 1.0);
  const auto a = run_usecase1(cfg);
  const auto b = run_usecase1(cfg);
  ASSERT_TRUE(a.all_succeeded() && b.all_succeeded());
  std::vector<double> ta, tb;
  for (const auto& r : a.records[0]) ta.push_back(r.t_handshake_ms);
  for (const auto& r : b.records[0]) tb.push_back(r.t_handshake_ms);
  EXPECT_GT(welch_t_test(ta, tb).p_value, 0.01);
}
