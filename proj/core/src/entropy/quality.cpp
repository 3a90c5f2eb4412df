#include "eaas/entropy/quality.hpp"

#include <algorithm>
#include <cmath>

#include "eaas/error.hpp"

namespace eaas::entropy {

namespace {

void check_claim(double h_claim) {
  if (!(h_claim > 0.0 && h_claim <= 1.0)) {
    throw Error(Errc::invalid_argument, "entropy claim must lie in (0,1]");
  }
}

// log of the binomial pmf, evaluated in log space so the far tail stays finite.
double log_binomial_pmf(unsigned n, unsigned k, double p) {
  if (p <= 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p >= 1.0) return k == n ? 0.0 : -INFINITY;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace

Estimate min_entropy_from_counts(std::uint64_t ones, std::uint64_t n_bits) {
  if (n_bits == 0) throw Error(Errc::invalid_argument, "empty bit sequence");
  const double n = static_cast<double>(n_bits);
  const double p_hat = static_cast<double>(std::max(ones, n_bits - ones)) / n;
  const double p_upper =
      std::min(1.0, p_hat + kUpperBoundZ * std::sqrt(p_hat * (1.0 - p_hat) / n));
  const double h = p_upper >= 1.0 ? 0.0 : -std::log2(p_upper);
  return {std::clamp(h, 0.0, 1.0), n_bits < kMinEntropyConfidentBits};
}

Estimate estimate_min_entropy(BitSpan bits) {
  return min_entropy_from_counts(bits.count_ones(), bits.size());
}

Estimate q_factor_from_counts(std::uint64_t ones, std::uint64_t n_bits) {
  if (n_bits == 0) throw Error(Errc::invalid_argument, "empty bit sequence");
  const double diff = std::fabs(static_cast<double>(ones) - static_cast<double>(n_bits - ones));
  const double s = diff / std::sqrt(static_cast<double>(n_bits));
  return {std::clamp(std::erfc(s / std::sqrt(2.0)), 0.0, 1.0),
          n_bits < kQFactorConfidentBits};
}

Estimate q_factor(BitSpan bits) { return q_factor_from_counts(bits.count_ones(), bits.size()); }

unsigned repetition_cutoff(double h_claim) {
  check_claim(h_claim);
  return 1u + static_cast<unsigned>(std::ceil(kHealthAlphaLog2 / h_claim));
}

unsigned adaptive_proportion_cutoff(double h_claim, unsigned window) {
  check_claim(h_claim);
  if (window < 2) throw Error(Errc::invalid_argument, "window too small");
  // Smallest k with P(X > k) <= alpha for X ~ Bin(window, 2^-H); cutoff k+1.
  const double p = std::exp2(-h_claim);
  const double log_alpha = -kHealthAlphaLog2 * std::log(2.0);
  double tail = -INFINITY;  // log P(X > k), accumulated from the top down
  for (unsigned k = window; k-- > 0;) {
    const double next = log_binomial_pmf(window, k + 1, p);
    const double hi = std::max(tail, next);
    const double merged =
        hi == -INFINITY ? -INFINITY : hi + std::log(std::exp(tail - hi) + std::exp(next - hi));
    if (merged > log_alpha) return k + 2;  // k+1 is the critical value
    tail = merged;
  }
  return 1;
}

HealthMonitor::HealthMonitor(double h_claim)
    : rep_cutoff_(repetition_cutoff(h_claim)), apt_cutoff_(adaptive_proportion_cutoff(h_claim)) {}

HealthStatus HealthMonitor::feed(BitSpan bits) {
  HealthStatus status;
  auto fail = [&status](const char* name) {
    if (status.ok) {
      status.ok = false;
      status.failing_test = name;
    }
  };
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const bool b = bits[i];

    if (have_last_ && b == last_) {
      ++run_;
    } else {
      run_ = 1;
      last_ = b;
      have_last_ = true;
    }
    if (run_ >= rep_cutoff_) {
      fail("repetition-count");
      run_ = 1;  // report once per offending run
    }

    if (apt_seen_ == 0) {
      apt_reference_ = b;
      apt_count_ = 1;
    } else if (b == apt_reference_) {
      ++apt_count_;
    }
    if (++apt_seen_ == kAdaptiveProportionWindow) {
      if (apt_count_ >= apt_cutoff_) fail("adaptive-proportion");
      apt_seen_ = 0;
    }
  }
  return status;
}

HealthStatus health_check(BitSpan bits, double h_claim) {
  HealthMonitor monitor(h_claim);
  return monitor.feed(bits);
}

QualityReport assess_block(std::span<const std::uint8_t> block, double h_claim) {
  const BitSpan bits(block);
  if (bits.empty()) throw Error(Errc::invalid_argument, "empty block");
  const auto ones = bits.count_ones();
  const auto h = min_entropy_from_counts(ones, bits.size());
  const auto q = q_factor_from_counts(ones, bits.size());
  return {h.value, q.value, health_check(bits, h_claim).ok, bits.size(),
          h.low_confidence || q.low_confidence};
}

}  // namespace eaas::entropy
