#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "eaas/bits.hpp"

namespace eaas::entropy {

// Below these sizes an estimate is still returned, but flagged.
inline constexpr std::size_t kMinEntropyConfidentBits = 1000;
inline constexpr std::size_t kQFactorConfidentBits = 100;

// z-score of the one-sided 99% upper confidence bound on the most common
// value's probability.
inline constexpr double kUpperBoundZ = 2.576;

// Health tests target a false-alarm rate of 2^-20 per window.
inline constexpr double kHealthAlphaLog2 = 20.0;
inline constexpr unsigned kAdaptiveProportionWindow = 1024;

struct Estimate {
  double value = 0.0;
  bool low_confidence = false;
};

// Most-common-value min-entropy estimate, in bits per bit, clamped to [0,1].
Estimate estimate_min_entropy(BitSpan bits);
Estimate min_entropy_from_counts(std::uint64_t ones, std::uint64_t n_bits);

// Monobit frequency p-value: erfc(|ones - zeros| / sqrt(2n)).
Estimate q_factor(BitSpan bits);
Estimate q_factor_from_counts(std::uint64_t ones, std::uint64_t n_bits);

unsigned repetition_cutoff(double h_claim);
unsigned adaptive_proportion_cutoff(double h_claim,
                                    unsigned window = kAdaptiveProportionWindow);

struct HealthStatus {
  bool ok = true;
  std::string failing_test;  // "repetition-count" or "adaptive-proportion"
};

// Continuous health tests over a bit stream fed in arbitrary chunks. The
// repetition run and the current adaptive-proportion window carry across
// chunk boundaries; feed() reports only failures detected within the chunk.
class HealthMonitor {
 public:
  explicit HealthMonitor(double h_claim);

  HealthStatus feed(BitSpan bits);

  unsigned repetition_limit() const noexcept { return rep_cutoff_; }
  unsigned proportion_limit() const noexcept { return apt_cutoff_; }

 private:
  unsigned rep_cutoff_;
  unsigned apt_cutoff_;

  bool have_last_ = false;
  bool last_ = false;
  unsigned run_ = 0;

  unsigned apt_seen_ = 0;
  bool apt_reference_ = false;
  unsigned apt_count_ = 0;
};

HealthStatus health_check(BitSpan bits, double h_claim);

struct QualityReport {
  double min_entropy_per_bit = 0.0;
  double q_factor = 0.0;
  bool health_ok = false;
  std::uint64_t n_bits = 0;
  bool low_confidence = false;

  bool operator==(const QualityReport&) const = default;
};

// Quality of a standalone block: every estimator runs over the block itself.
QualityReport assess_block(std::span<const std::uint8_t> block, double h_claim);

}  // namespace eaas::entropy
