#include "rmtlab/statistics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rmtlab::stats {

double trace_scale(int n, double p, int m) {
  const double np = n * p;
  return 2.0 * m * std::pow(np, 2 * m - 1) * std::sqrt(p * (1.0 - p));
}

NormalizedSample normalize_traces(std::span<const BigInt> traces, int n, double p, int m) {
  if (traces.size() < 2) throw std::invalid_argument("normalize_traces: need at least two traces");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normalize_traces: requires 0 < p < 1");
  if (m < 1 || n < 1) throw std::invalid_argument("normalize_traces: requires n, m >= 1");

  const auto count = static_cast<long>(traces.size());
  const BigInt sum = std::accumulate(traces.begin(), traces.end(), BigInt(0));
  NormalizedSample out;
  out.scale_used = trace_scale(n, p, m);
  out.center = to_double(sum) / static_cast<double>(count);
  out.degenerate = std::all_of(traces.begin(), traces.end(), [&](const BigInt& t) { return t == traces.front(); });
  out.values.reserve(traces.size());
  const double denom = static_cast<double>(count) * out.scale_used;
  for (const BigInt& t : traces) out.values.push_back(to_double(BigInt(t * count - sum)) / denom);
  return out;
}

NormalizedSample normalize_lambda1(std::span<const double> values, double p) {
  if (values.size() < 2) throw std::invalid_argument("normalize_lambda1: need at least two values");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normalize_lambda1: requires 0 < p < 1");
  NormalizedSample out;
  out.scale_used = std::sqrt(p * (1.0 - p));
  out.center = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  out.degenerate = std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back(out.degenerate ? 0.0 : (v - out.center) / out.scale_used);
  return out;
}

double normal02_cdf(double x) { return 0.5 * std::erfc(-x / 2.0); }

double normal02_density(double x) { return std::exp(-x * x / 4.0) / std::sqrt(4.0 * M_PI); }

double normal02_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("normal02_quantile: u must lie in (0, 1)");
  return 2.0 * boost::math::erf_inv(2.0 * u - 1.0);
}

double ks_distance(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto r = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal02_cdf(sorted[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / r - f, f - static_cast<double>(i) / r});
  }
  return worst;
}

double limiting_moment(int l) {
  if (l < 1) throw std::invalid_argument("limiting_moment: l must be >= 1");
  if (l % 2 == 1) return 0.0;
  double double_factorial = 1.0;
  for (int k = l - 1; k > 1; k -= 2) double_factorial *= k;
  return std::pow(2.0, l / 2) * double_factorial;
}

SummaryMoments summary_moments(std::span<const double> values) {
  if (values.size() < 4) throw std::invalid_argument("summary_moments: need at least four values");
  const auto r = static_cast<double>(values.size());
  SummaryMoments s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / r;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  s.variance = m2 / (r - 1.0);
  s.third = m3 / r;
  s.fourth = m4 / r;
  return s;
}

double tail_bound(int n, double p, int m, double t) {
  if (!(t > 0.0) || m < 1) throw std::invalid_argument("tail_bound: requires t > 0 and m >= 1");
  const double np = n * p;
  // Evaluated in logs so large m or tiny t neither overflow nor underflow early.
  const double log_bound = std::log(4.0) + m * std::log(16.0) + std::log(static_cast<double>(n)) -
                           m * std::log(np) - 2.0 * m * std::log(t);
  return std::exp(log_bound);
}

double tail_frequency(std::span<const double> lambda1_values, double t) {
  if (lambda1_values.empty()) throw std::invalid_argument("tail_frequency: empty sample");
  const double mean =
      std::accumulate(lambda1_values.begin(), lambda1_values.end(), 0.0) / static_cast<double>(lambda1_values.size());
  const auto hits = std::count_if(lambda1_values.begin(), lambda1_values.end(),
                                  [&](double v) { return std::fabs(v / mean - 1.0) >= t; });
  return static_cast<double>(hits) / static_cast<double>(lambda1_values.size());
}

bool expectation_window_check(double lambda1_mean, int n, double p) {
  const double np = n * p;
  return lambda1_mean >= np - 3.0 && lambda1_mean <= np + 2.0;
}

bool TailCheck::within_bound() const {
  return empirical_frequency <= bound + 3.0 * std::sqrt(bound / static_cast<double>(replicates));
}

TailCheck tail_check(std::span<const double> lambda1_values, int n, double p, int m, double t) {
  return {.m = m,
          .t = t,
          .n = n,
          .p = p,
          .bound = tail_bound(n, p, m, t),
          .empirical_frequency = tail_frequency(lambda1_values, t),
          .replicates = static_cast<long>(lambda1_values.size())};
}

double trace_sample_variance(std::span<const BigInt> traces) {
  if (traces.size() < 2) throw std::invalid_argument("trace_sample_variance: need at least two traces");
  const auto r = static_cast<long>(traces.size());
  BigInt sum = 0, sum_sq = 0;
  for (const BigInt& t : traces) {
    sum += t;
    sum_sq += t * t;
  }
  // Var = (R Σt² - (Σt)²) / (R (R-1)), exact up to the final division.
  const Rational var(BigInt(sum_sq * r - sum * sum), BigInt(r) * (r - 1));
  return to_double(var);
}

double trace_variance_leading_term(int n, double p, int m) {
  const double np = n * p;
  return 2.0 * (2.0 * m) * (2.0 * m) * std::pow(np, 4 * m - 2) * p * (1.0 - p);
}

}  // namespace rmtlab::stats
