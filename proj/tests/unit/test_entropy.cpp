#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "eaas/entropy/device.hpp"
#include "eaas/entropy/quality.hpp"
#include "eaas/error.hpp"

using namespace eaas;
using namespace eaas::entropy;

namespace {

std::vector<std::uint8_t> bytes_of(const DeviceModel& m, std::size_t n) {
  EntropyDevice dev(m);
  return dev.generate(n).data;
}

DeviceModel model_with(double p_one, std::uint64_t seed, std::size_t window = 8000) {
  DeviceModel m;
  m.p_one = p_one;
  m.seed = seed;
  m.window_bits = window;
  return m;
}

}  // namespace

TEST(Bits, MsbFirstIndexing) {
  const std::vector<std::uint8_t> b{0x80, 0x01};
  BitSpan s(b);
  EXPECT_EQ(s.size(), 16u);
  EXPECT_TRUE(s[0]);
  EXPECT_FALSE(s[1]);
  EXPECT_TRUE(s[15]);
  EXPECT_EQ(s.count_ones(), 2u);
  EXPECT_EQ(BitSpan(b, 9).count_ones(), 1u);
}

TEST(Bits, PackRoundTrip) {
  const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 0, 0, 0, 1};
  const auto packed = pack_bits(bits);
  ASSERT_EQ(packed.size(), 2u);
  EXPECT_EQ(packed[0], 0xB0);
  EXPECT_EQ(packed[1], 0x80);
  BitSpan s(packed, bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) EXPECT_EQ(s[i], bits[i] == 1);
}

TEST(MinEntropy, ConstantSourceIsZero) {
  const std::vector<std::uint8_t> zeros(125000, 0);
  const auto e = estimate_min_entropy(BitSpan(zeros));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_FALSE(e.low_confidence);
}

TEST(MinEntropy, BalancedMillionBits) {
  // -log2(0.5 + 2.576 * sqrt(0.25 / 1e6))
  const auto e = min_entropy_from_counts(500000, 1000000);
  EXPECT_NEAR(e.value, 0.9962883960707226, 1e-12);
  std::vector<std::uint8_t> alt(125000, 0xAA);
  EXPECT_NEAR(estimate_min_entropy(BitSpan(alt)).value, 0.9962883960707226, 1e-12);
}

TEST(MinEntropy, ClampedAndFlagged) {
  EXPECT_LE(min_entropy_from_counts(5, 10).value, 1.0);
  EXPECT_GE(min_entropy_from_counts(5, 10).value, 0.0);
  EXPECT_TRUE(min_entropy_from_counts(5, 10).low_confidence);
  EXPECT_TRUE(min_entropy_from_counts(500, 999).low_confidence);
  EXPECT_FALSE(min_entropy_from_counts(500, 1000).low_confidence);
}

TEST(MinEntropy, EmptyInputRejected) {
  try {
    estimate_min_entropy(BitSpan{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
  }
}

TEST(MinEntropy, CalibrationAcrossClaims) {
  for (double h : {0.5, 0.8, 0.93, 1.0}) {
    const auto data = bytes_of(model_with(std::exp2(-h), 1000 + static_cast<std::uint64_t>(h * 100)), 125000);
    const double est = estimate_min_entropy(BitSpan(data)).value;
    if (h == 1.0) {
      EXPECT_LE(est, 1.0);
      EXPECT_GE(est, 0.99);
    } else {
      EXPECT_NEAR(est, h, 0.02) << "H=" << h;
    }
  }
}

TEST(MinEntropy, NominalBiasLandsInBand) {
  const auto data = bytes_of(model_with(0.5246, 1), 125000);
  const double ones = static_cast<double>(BitSpan(data).count_ones()) / 1e6;
  EXPECT_NEAR(ones, 0.5246, 0.005);
  const double est = estimate_min_entropy(BitSpan(data)).value;
  EXPECT_GE(est, 0.91);
  EXPECT_LE(est, 0.95);
}

TEST(MinEntropy, MoreBiasNeverRaisesMeanEstimate) {
  double previous = 2.0;
  for (double bias : {0.0, 0.02, 0.05, 0.1, 0.2, 0.3, 0.45}) {
    double sum = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto data = bytes_of(model_with(0.5 + bias, 50000 + t), 1250);
      sum += estimate_min_entropy(BitSpan(data)).value;
    }
    const double mean = sum / 100.0;
    EXPECT_LE(mean, previous) << "bias " << bias;
    previous = mean;
  }
}

TEST(QFactor, BalancedIsOne) {
  std::vector<std::uint8_t> alt(64, 0x55);
  EXPECT_DOUBLE_EQ(q_factor(BitSpan(alt)).value, 1.0);
}

TEST(QFactor, AllOnesHundredBits) {
  std::vector<std::uint8_t> ones(13, 0xFF);
  const auto q = q_factor(BitSpan(ones, 100));
  EXPECT_NEAR(q.value, 1.5239706048321186e-23, 1e-30);
  EXPECT_LT(q.value, 1e-20);
  EXPECT_FALSE(q.low_confidence);
  EXPECT_TRUE(q_factor(BitSpan(ones, 99)).low_confidence);
}

TEST(QFactor, UniformUnderFairSource) {
  // Kolmogorov-Smirnov against U(0,1); 1.63/sqrt(n) is the 1% critical value.
  std::vector<double> scores;
  for (int t = 0; t < 100; ++t) {
    const auto data = bytes_of(model_with(0.5, 900 + t), 125000);
    scores.push_back(q_factor(BitSpan(data)).value);
  }
  std::sort(scores.begin(), scores.end());
  double d = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double n = static_cast<double>(scores.size());
    d = std::max({d, std::fabs(scores[i] - static_cast<double>(i) / n),
                  std::fabs(static_cast<double>(i + 1) / n - scores[i])});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(100.0));
}

TEST(Health, Cutoffs) {
  EXPECT_EQ(repetition_cutoff(0.93), 23u);
  EXPECT_EQ(repetition_cutoff(1.0), 21u);
  EXPECT_EQ(adaptive_proportion_cutoff(0.93), 614u);
  EXPECT_EQ(adaptive_proportion_cutoff(0.5), 793u);
  EXPECT_EQ(adaptive_proportion_cutoff(0.8), 664u);
  EXPECT_EQ(adaptive_proportion_cutoff(0.9), 625u);
  EXPECT_EQ(adaptive_proportion_cutoff(1.0), 589u);
}

TEST(Health, RunAtCutoffFails) {
  std::vector<std::uint8_t> bits(23, 1);
  auto s = health_check(BitSpan(pack_bits(bits), 23), 0.93);
  EXPECT_FALSE(s.ok);
  EXPECT_EQ(s.failing_test, "repetition-count");
  bits.pop_back();
  EXPECT_TRUE(health_check(BitSpan(pack_bits(bits), 22), 0.93).ok);
}

TEST(Health, RunCarriesAcrossChunks) {
  HealthMonitor m(0.93);
  const std::vector<std::uint8_t> ones{0xFF, 0xFF};
  EXPECT_TRUE(m.feed(BitSpan(ones, 12)).ok);
  EXPECT_FALSE(m.feed(BitSpan(ones, 11)).ok);
}

TEST(Health, ProportionTestCatchesBias) {
  // Alternate ones with a rare zero: no long runs, but ~90% ones.
  std::vector<std::uint8_t> bits;
  for (int i = 0; i < 4096; ++i) bits.push_back(i % 10 == 9 ? 0 : 1);
  const auto s = health_check(BitSpan(pack_bits(bits), bits.size()), 0.93);
  EXPECT_FALSE(s.ok);
  EXPECT_EQ(s.failing_test, "adaptive-proportion");
}

TEST(Health, FalseAlarmRateMatchesAnalyticOracle) {
  // Exact probability that 1e6 fair bits contain no run of 23 is 0.88762;
  // the adaptive-proportion test removes at most ~1e-3 more.
  int pass = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto data = bytes_of(model_with(0.5, 77000 + t), 125000);
    pass += health_check(BitSpan(data), 0.93).ok ? 1 : 0;
  }
  const double rate = static_cast<double>(pass) / trials;
  const double sd = std::sqrt(0.8876 * 0.1124 / trials);
  EXPECT_NEAR(rate, 0.8876, 4 * sd);
}

TEST(Health, ServedBlockSizeAlmostNeverAlarms) {
  // 256-bit blocks at p = 2^-0.93: analytic pass probability 0.99995.
  int fail = 0;
  EntropyDevice dev(model_with(std::exp2(-0.93), 5));
  for (int t = 0; t < 2000; ++t) {
    HealthMonitor m(0.93);
    const auto b = dev.generate(32);
    fail += m.feed(BitSpan(b.data)).ok ? 0 : 1;
  }
  EXPECT_LE(fail, 2);
}

TEST(Device, GenerationTime) {
  DeviceModel m;
  EXPECT_NEAR(generation_time_us(m, 32), 0.8827586206896552, 1e-15);
  EXPECT_DOUBLE_EQ(generation_time_us(m, 64), 2 * generation_time_us(m, 32));
  EXPECT_DOUBLE_EQ(generation_time_us(m, 3200), 100 * generation_time_us(m, 32));
  m.rate_bps = 1e6;
  EXPECT_DOUBLE_EQ(generation_time_us(m, 1), 8.0);
}

TEST(Device, ZeroBiasGivesZeros) {
  EntropyDevice dev(model_with(0.0, 1));
  const auto b = dev.generate(4);
  EXPECT_EQ(b.data, std::vector<std::uint8_t>(4, 0));
  EXPECT_FALSE(b.quality.health_ok);
  EXPECT_EQ(b.quality.min_entropy_per_bit, 0.0);
}

TEST(Device, FullBiasGivesOnes) {
  const auto data = bytes_of(model_with(1.0, 1), 4);
  EXPECT_EQ(data, std::vector<std::uint8_t>(4, 0xFF));
}

TEST(Device, DeterministicAndSequenced) {
  EntropyDevice a(model_with(0.5246, 42));
  EntropyDevice b(model_with(0.5246, 42));
  std::uint64_t last = 0;
  for (std::size_t n : {1u, 32u, 100u, 7u}) {
    const auto x = a.generate(n);
    const auto y = b.generate(n);
    EXPECT_EQ(x.data, y.data);
    EXPECT_GT(x.sequence, last);
    last = x.sequence;
    EXPECT_DOUBLE_EQ(x.t_gen_us, generation_time_us(a.model(), n));
  }
  EXPECT_EQ(a.blocks_generated(), 4u);
  EntropyDevice c(model_with(0.5246, 43));
  EXPECT_NE(c.generate(32).data, EntropyDevice(model_with(0.5246, 42)).generate(32).data);
}

TEST(Device, ReportUsesRollingWindow) {
  DeviceModel m;
  m.p_one = std::exp2(-0.93);
  EntropyDevice dev(m);
  const auto b = dev.generate(32);
  EXPECT_EQ(b.quality.n_bits, 1000000u);
  EXPECT_FALSE(b.quality.low_confidence);
  EXPECT_GE(b.quality.min_entropy_per_bit, 0.91);
  EXPECT_LE(b.quality.min_entropy_per_bit, 0.95);
  EXPECT_GE(b.quality.q_factor, 0.0);
  EXPECT_LE(b.quality.q_factor, 1.0);
}

TEST(Device, RejectsBadInput) {
  EntropyDevice dev(model_with(0.5, 1));
  EXPECT_THROW(dev.generate(0), Error);
  DeviceModel m;
  m.rate_bps = 0;
  EXPECT_THROW(EntropyDevice{m}, Error);
  m = {};
  m.p_one = 1.5;
  EXPECT_THROW(EntropyDevice{m}, Error);
}

TEST(Device, TrueMinEntropy) {
  DeviceModel m;
  m.p_one = 0.5248583418115336;
  EXPECT_NEAR(m.true_min_entropy(), 0.93, 1e-12);
  m.p_one = 0.05;
  EXPECT_NEAR(m.true_min_entropy(), -std::log2(0.95), 1e-12);
}

TEST(AssessBlock, CountsBlockBits) {
  std::vector<std::uint8_t> b(125, 0x5A);
  const auto r = assess_block(b, 0.93);
  EXPECT_EQ(r.n_bits, 1000u);
  EXPECT_DOUBLE_EQ(r.q_factor, 1.0);
  EXPECT_TRUE(r.health_ok);
}
