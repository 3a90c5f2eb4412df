#pragma once

#include <cstddef>
#include <span>

namespace eaas::experiment {

// Mean with its standard error (sample sd / sqrt(n)).
struct Stat {
  double mean = 0.0;
  double sem = 0.0;

  bool operator==(const Stat&) const = default;
};

// Needs at least one sample; with exactly one the standard error is zero.
Stat mean_sem(std::span<const double> samples);

// t_eaas / t_handshake. Requires 0 <= t_eaas <= t_handshake and a positive
// handshake time.
double overhead_ratio(double t_eaas_ms, double t_handshake_ms);

// (t_gen_us / 1000) / t_handshake_ms. Both must be positive.
double qrng_fraction(double t_gen_us, double t_handshake_ms);

// Standard error of a/b from independent errors on a and b.
double propagate_ratio_error(double a, double sigma_a, double b, double sigma_b);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;  // two-sided
};

// Two-sample t-test without the equal-variance assumption. Each sample
// needs at least two values.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace eaas::experiment
