#include "eaas/experiment/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>

#include "eaas/error.hpp"

namespace eaas::experiment {

namespace {

struct Moments {
  double mean;
  double var;  // unbiased sample variance
};

Moments moments(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, x.size() > 1 ? ss / (n - 1.0) : 0.0};
}

}  // namespace

Stat mean_sem(std::span<const double> samples) {
  if (samples.empty()) throw Error(Errc::invalid_argument, "mean of an empty sample");
  const auto m = moments(samples);
  return {m.mean, std::sqrt(m.var / static_cast<double>(samples.size()))};
}

double overhead_ratio(double t_eaas_ms, double t_handshake_ms) {
  if (!(t_handshake_ms > 0.0)) throw Error(Errc::invalid_argument, "handshake time must be positive");
  if (!(t_eaas_ms >= 0.0) || t_eaas_ms > t_handshake_ms) {
    throw Error(Errc::invalid_argument, "EaaS time must lie in [0, t_handshake]");
  }
  return t_eaas_ms / t_handshake_ms;
}

double qrng_fraction(double t_gen_us, double t_handshake_ms) {
  if (!(t_handshake_ms > 0.0)) throw Error(Errc::invalid_argument, "handshake time must be positive");
  if (!(t_gen_us > 0.0)) throw Error(Errc::invalid_argument, "generation time must be positive");
  return (t_gen_us / 1000.0) / t_handshake_ms;
}

double propagate_ratio_error(double a, double sigma_a, double b, double sigma_b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(Errc::invalid_argument, "ratio operands must be positive");
  if (!(sigma_a >= 0.0) || !(sigma_b >= 0.0)) throw Error(Errc::invalid_argument, "errors must be nonnegative");
  const double r = a / b;
  const double ra = sigma_a / a;
  const double rb = sigma_b / b;
  return r * std::sqrt(ra * ra + rb * rb);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error(Errc::invalid_argument, "t-test needs two samples of size >= 2");
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double va = ma.var / static_cast<double>(a.size());
  const double vb = mb.var / static_cast<double>(b.size());
  WelchResult out;
  if (va + vb == 0.0) {
    out.t = 0.0;
    out.dof = static_cast<double>(a.size() + b.size() - 2);
    out.p_value = ma.mean == mb.mean ? 1.0 : 0.0;
    return out;
  }
  out.t = (ma.mean - mb.mean) / std::sqrt(va + vb);
  out.dof = (va + vb) * (va + vb) /
            (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  const boost::math::students_t dist(out.dof);
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.t)));
  return out;
}

}  // namespace eaas::experiment
