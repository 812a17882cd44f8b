#include "doctest.h"

#include "rmtlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace rmtlab;
using namespace rmtlab::stats;

TEST_CASE("trace normalization") {
  CHECK(trace_scale(100, 0.1, 2) == doctest::Approx(1200.0));

  const std::vector<BigInt> same{BigInt(7), BigInt(7)};
  const NormalizedSample flat = normalize_traces(same, 100, 0.1, 2);
  CHECK(flat.degenerate);
  CHECK(flat.values == std::vector<double>{0.0, 0.0});

  const std::vector<BigInt> sym{BigInt(1000 - 2400), BigInt(1000 + 2400)};
  const NormalizedSample z = normalize_traces(sym, 100, 0.1, 2);
  CHECK(z.values[0] == doctest::Approx(-2.0));
  CHECK(z.values[1] == doctest::Approx(2.0));
  CHECK(z.scale_used == doctest::Approx(1200.0));
  CHECK_FALSE(z.degenerate);
  CHECK(z.target_variance == 2.0);

  CHECK_THROWS(normalize_traces(std::vector<BigInt>{BigInt(1)}, 100, 0.1, 2));
  CHECK_THROWS(normalize_traces(sym, 100, 1.0, 2));
}

TEST_CASE("trace normalization is exact for huge shifted values") {
  const BigInt big = BigInt(1) << 200;
  std::vector<BigInt> base{BigInt(0), BigInt(1200), BigInt(3600), BigInt(-1200)};
  std::vector<BigInt> shifted;
  for (const auto& t : base) shifted.push_back(t + big);
  const auto a = normalize_traces(base, 100, 0.1, 2);
  const auto b = normalize_traces(shifted, 100, 0.1, 2);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-15));
  CHECK(a.values[1] == doctest::Approx(0.25));

  std::vector<BigInt> scaled;
  for (const auto& t : base) scaled.push_back(t * 3);
  const auto c = normalize_traces(scaled, 100, 0.1, 2);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(c.values[i] == doctest::Approx(3 * a.values[i]));
}

TEST_CASE("lambda1 normalization") {
  const auto half = normalize_lambda1(std::vector<double>{1.0, 2.0}, 0.5);
  CHECK(half.scale_used == doctest::Approx(0.5));
  CHECK(half.values[1] == doctest::Approx(1.0));
  CHECK(normalize_lambda1(std::vector<double>{3.0, 3.0}, 0.0316).scale_used == doctest::Approx(0.17493).epsilon(1e-4));
  const auto flat = normalize_lambda1(std::vector<double>{4.0, 4.0, 4.0}, 0.2);
  CHECK(flat.degenerate);
  CHECK(std::all_of(flat.values.begin(), flat.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("normal(0,2) helpers") {
  CHECK(normal02_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal02_cdf(std::sqrt(2.0)) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
  CHECK(normal02_density(0.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))));
  for (double u : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999})
    CHECK(normal02_cdf(normal02_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("KS distance") {
  CHECK(ks_distance(std::vector<double>{0.0}) == doctest::Approx(0.5));
  for (int r : {1, 10, 400}) {
    std::vector<double> q;
    for (int i = 1; i <= r; ++i) q.push_back(normal02_quantile((i - 0.5) / r));
    CHECK(ks_distance(q) == doctest::Approx(0.5 / r).epsilon(1e-9));
    std::reverse(q.begin(), q.end());
    CHECK(ks_distance(q) == doctest::Approx(0.5 / r).epsilon(1e-9));
  }
  std::mt19937_64 gen(42);
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0));
  std::vector<double> s(400);
  for (double& v : s) v = dist(gen);
  CHECK(ks_distance(s) <= 0.08);
  CHECK_THROWS(ks_distance(std::vector<double>{}));
}

TEST_CASE("summary moments") {
  CHECK(limiting_moment(2) == 2.0);
  CHECK(limiting_moment(3) == 0.0);
  CHECK(limiting_moment(4) == 12.0);
  CHECK(limiting_moment(6) == 120.0);

  const auto m = summary_moments(std::vector<double>{-1, 1, -1, 1});
  CHECK(m.mean == 0.0);
  CHECK(m.variance == doctest::Approx(4.0 / 3.0));
  CHECK(m.third == 0.0);
  CHECK(m.fourth == doctest::Approx(1.0));
  CHECK_THROWS(summary_moments(std::vector<double>{1, 2, 3}));

  std::mt19937_64 gen(7);
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0));
  std::vector<double> s(200000);
  for (double& v : s) v = dist(gen);
  const auto big = summary_moments(s);
  CHECK(big.variance == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::abs(big.third) < 0.1);
  CHECK(big.fourth == doctest::Approx(12.0).epsilon(0.05));
}

TEST_CASE("tail bound") {
  CHECK(tail_bound(1000, 0.1, 6, 1.0) == doctest::Approx(4.0 * std::pow(16.0, 6) * 1000 / std::pow(100.0, 6)));
  CHECK(tail_bound(1000, 0.1, 6, 1.0) == doctest::Approx(0.0671).epsilon(1e-3));
  CHECK(tail_bound(10, 0.5, 1, 1.0) == doctest::Approx(128.0));  // 4·16·10 / 5, vacuous
  CHECK(tail_bound(1000, 0.1, 6, 1e6) < 1e-60);
  double prev = tail_bound(1000, 0.1, 3, 0.5);
  for (double t = 0.6; t < 3.0; t += 0.1) {
    const double b = tail_bound(1000, 0.1, 3, t);
    CHECK(b < prev);
    prev = b;
  }
  prev = tail_bound(1000, 0.05, 3, 1.0);
  for (double p = 0.06; p < 0.5; p += 0.01) {
    const double b = tail_bound(1000, p, 3, 1.0);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("tail frequency and check") {
  const std::vector<double> l{1.0, 1.0, 1.0, 5.0};
  CHECK(tail_frequency(l, 1.0) == doctest::Approx(0.25));
  CHECK(tail_frequency(l, 10.0) == 0.0);
  const TailCheck tc = tail_check(l, 1000, 0.1, 6, 1.0);
  CHECK(tc.bound == doctest::Approx(0.0671).epsilon(1e-3));
  CHECK(tc.replicates == 4);
  CHECK(tc.empirical_frequency == doctest::Approx(0.25));
  CHECK(tc.within_bound());  // 0.25 <= 0.0671 + 3 sqrt(0.0671 / 4)
  TailCheck tight = tc;
  tight.replicates = 2000;
  CHECK_FALSE(tight.within_bound());
}

TEST_CASE("expectation window") {
  const int n = 1000;
  const double p = 1 / std::sqrt(1000.0);
  CHECK(expectation_window_check(32.6, n, p));
  CHECK_FALSE(expectation_window_check(n * p + 5, n, p));
  CHECK_FALSE(expectation_window_check(n * p - 10, n, p));
}

TEST_CASE("trace variance") {
  const std::vector<BigInt> t{BigInt(1), BigInt(2), BigInt(3), BigInt(4)};
  CHECK(trace_sample_variance(t) == doctest::Approx(5.0 / 3.0));
  const BigInt big = BigInt(1) << 300;
  std::vector<BigInt> shifted;
  for (const auto& x : t) shifted.push_back(x + big);
  CHECK(trace_sample_variance(shifted) == doctest::Approx(5.0 / 3.0));
  CHECK(trace_variance_leading_term(100, 0.1, 2) == doctest::Approx(2.0 * 16 * 1e6 * 0.09));
}
