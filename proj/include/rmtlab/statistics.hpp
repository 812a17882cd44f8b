// Normalizations for the trace and top-eigenvalue CLTs, distance to the
// N(0, 2) limit, and concentration bounds.
//
// Centering always uses the empirical mean of the sample: no exact closed
// form for E[tr(A^{2m})] or E[λ1] is available, and replacing the
// expectation by the sample mean changes the statistic by O(1/sqrt(R)) on
// the fluctuation scale.
#pragma once

#include "rmtlab/exact.hpp"

#include <span>
#include <vector>

namespace rmtlab::stats {

/// Variance of the limiting normal law in both CLTs.
inline constexpr double kTargetVariance = 2.0;

struct NormalizedSample {
  std::vector<double> values;
  double scale_used = 1.0;
  double center = 0.0;   // empirical mean of the raw sample (as a double)
  bool degenerate = false;  // every raw value identical
  double target_variance = kTargetVariance;
};

/// 2m (np)^{2m-1} sqrt(p(1-p)).
double trace_scale(int n, double p, int m);

/// z_i = (T_i - mean T) / trace_scale. Differences are formed exactly as
/// R·T_i - sum(T) before conversion to floating point.
/// Requires at least two traces and 0 < p < 1.
NormalizedSample normalize_traces(std::span<const BigInt> traces, int n, double p, int m);

/// z_i = (λ_i - mean λ) / sqrt(p(1-p)).
NormalizedSample normalize_lambda1(std::span<const double> values, double p);

/// CDF of N(0, 2).
double normal02_cdf(double x);
double normal02_density(double x);
/// Quantile of N(0, 2), u in (0, 1).
double normal02_quantile(double u);

/// sup_x |F_R(x) - Φ_{0,2}(x)|. Requires a nonempty sample.
double ks_distance(std::span<const double> values);
inline double ks_distance(const NormalizedSample& s) { return ks_distance(s.values); }

struct SummaryMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, divisor R - 1
  double third = 0.0;     // central, divisor R
  double fourth = 0.0;    // central, divisor R
};

/// Limits of the l-th moment of the normalized statistic: 0 for odd l,
/// 2^{l/2} (l-1)!! for even l (2, 0, 12 for l = 2, 3, 4).
double limiting_moment(int l);

/// Requires at least four values.
SummaryMoments summary_moments(std::span<const double> values);

/// 4 · 16^m · n / ((np)^m t^{2m}). May exceed one.
double tail_bound(int n, double p, int m, double t);

/// Fraction of values with |λ / mean - 1| >= t.
double tail_frequency(std::span<const double> lambda1_values, double t);

/// Sample mean of λ1 inside [np - 3, np + 2].
bool expectation_window_check(double lambda1_mean, int n, double p);

struct TailCheck {
  int m = 0;
  double t = 0.0;
  int n = 0;
  double p = 0.0;
  double bound = 0.0;
  double empirical_frequency = 0.0;
  long replicates = 0;
  /// Frequency within bound + 3 sqrt(bound / R).
  bool within_bound() const;
};

TailCheck tail_check(std::span<const double> lambda1_values, int n, double p, int m, double t);

/// Unbiased sample variance of exact integer traces, computed exactly and
/// converted once.
double trace_sample_variance(std::span<const BigInt> traces);

/// Leading term 2 (2m)^2 (np)^{4m-2} p(1-p) of Var[tr(A^{2m})].
double trace_variance_leading_term(int n, double p, int m);

}  // namespace rmtlab::stats
