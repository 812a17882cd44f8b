#include "doctest.h"

#include "rmtlab/adjacency.hpp"
#include "rmtlab/eigensolver.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/trace_power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

using namespace rmtlab;
using namespace rmtlab::spectral;
using Edges = std::vector<std::pair<int, int>>;

namespace {

AdjacencyMatrix path_graph(int n) {
  Edges e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return AdjacencyMatrix::from_edges(n, false, e);
}

AdjacencyMatrix complete_graph(int n, bool loops) {
  Edges e;
  for (int i = 0; i < n; ++i)
    for (int j = loops ? i : i + 1; j < n; ++j) e.emplace_back(i, j);
  return AdjacencyMatrix::from_edges(n, loops, e);
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::bijection({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("replicate streams") {
  ReplicateStream a({.master_seed = 42, .replicate_index = 3});
  ReplicateStream b({.master_seed = 42, .replicate_index = 3});
  ReplicateStream c({.master_seed = 42, .replicate_index = 4});
  ReplicateStream d({.master_seed = 43, .replicate_index = 3});
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  ReplicateStream u({.master_seed = 1, .replicate_index = 0});
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const double y = u.next_open_closed();
    CHECK(y > 0.0);
    CHECK(y <= 1.0);
  }
}

TEST_CASE("adjacency construction") {
  const Edges e{{0, 1}, {1, 2}, {2, 2}};
  const auto a = AdjacencyMatrix::from_edges(3, true, e);
  CHECK(a.size() == 3);
  CHECK(a.edge_count() == 3);
  CHECK(a.nonzeros() == 5);
  CHECK(a.degree(1) == 2);
  CHECK(a.max_degree() == 2);
  CHECK(a.norm1() == 2.0);
  const std::vector<double> dense{0, 1, 0, 1, 0, 1, 0, 1, 1};
  CHECK(a.dense() == dense);
  std::vector<double> y(3);
  a.multiply(std::vector<double>{1, 2, 3}, y);
  CHECK(y == std::vector<double>{2, 4, 5});
  CHECK_THROWS_AS(AdjacencyMatrix::from_edges(3, false, e), std::invalid_argument);
  CHECK_THROWS_AS(AdjacencyMatrix::from_edges(3, true, Edges{{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(AdjacencyMatrix::from_edges(3, true, Edges{{0, 3}}), std::invalid_argument);
}

TEST_CASE("sampling edge cases and determinism") {
  const StreamSeed s{.master_seed = 9, .replicate_index = 1};
  CHECK(sample_adjacency(50, 0.0, true, s).edge_count() == 0);
  CHECK(sample_adjacency(50, 1.0, true, s).edge_count() == 50 * 51 / 2);
  CHECK(sample_adjacency(50, 1.0, false, s).edge_count() == 50 * 49 / 2);
  CHECK(sample_adjacency(300, 0.2, true, s) == sample_adjacency(300, 0.2, true, s));
  CHECK(sample_adjacency(300, 0.005, false, s) == sample_adjacency(300, 0.005, false, s));
  CHECK_FALSE(sample_adjacency(300, 0.2, true, s) == sample_adjacency(300, 0.2, true, {9, 2}));
  const auto g = sample_adjacency(200, 0.3, false, s);
  for (int v = 0; v < g.size(); ++v)
    for (int w : g.neighbors(v)) CHECK(v != w);
}

TEST_CASE("edge counts concentrate on both sampler paths") {
  for (double p : {1e-3, 0.05}) {
    const int n = p < kGeometricSkipThreshold ? 10000 : 1000;
    const double slots = n * (n + 1) / 2.0;
    const double mean = slots * p;
    const double sd = std::sqrt(slots * p * (1 - p));
    for (std::uint64_t r = 0; r < 3; ++r) {
      const auto a = sample_adjacency(n, p, true, {.master_seed = 5, .replicate_index = r});
      CHECK(std::abs(static_cast<double>(a.edge_count()) - mean) <= 6 * sd);
    }
  }
}

TEST_CASE("exact traces") {
  CHECK(trace_power_int(complete_graph(4, true), 1) == 16);
  CHECK(trace_power_int(complete_graph(4, true), 3) == 4096);  // rank one, eigenvalue 4
  CHECK(trace_power_int(path_graph(3), 1) == 4);
  CHECK(trace_power_int(path_graph(3), 2) == 8);
  CHECK(trace_power_int(complete_graph(5, false), 2) == 4 * 4 * 4 * 4 + 4);
  const auto empty = AdjacencyMatrix::from_edges(5, true, Edges{});
  CHECK(trace_power_int(empty, 3) == 0);
  CHECK_THROWS_AS(trace_power_int(complete_graph(20, false), 3, TracePath::automatic, 10), std::length_error);
}

TEST_CASE("forced trace paths agree") {
  for (std::uint64_t r = 0; r < 4; ++r) {
    const auto a = sample_adjacency(120, 0.1, true, {.master_seed = 11, .replicate_index = r});
    for (int m = 1; m <= 4; ++m) {
      const BigInt ref = trace_power_int(a, m, TracePath::bigint);
      CHECK(trace_power_int(a, m, TracePath::int64) == ref);
      CHECK(trace_power_int(a, m, TracePath::int128) == ref);
      CHECK(trace_power_int(a, m) == ref);
    }
  }
  CHECK(select_trace_path(path_graph(4), 2) == TracePath::int64);
  CHECK(select_trace_path(complete_graph(200, true), 12) == TracePath::bigint);
}

TEST_CASE("automatic path handles values beyond 64 bits") {
  const auto k = complete_graph(64, true);
  // J_64^{2m} has trace 64^{2m}; m = 6 gives 2^72.
  CHECK(trace_power_int(k, 6) == BigInt(1) << 72);
  CHECK(trace_power_int(k, 12) == BigInt(1) << 144);
}

TEST_CASE("dense spectra") {
  const std::vector<double> diag{3, 0, 0, 0, -1, 0, 0, 0, 5};
  const auto d = full_spectrum(diag, 3);
  CHECK(d[0] == doctest::Approx(-1.0));
  CHECK(d[1] == doctest::Approx(3.0));
  CHECK(d[2] == doctest::Approx(5.0));

  const std::vector<double> two{2, 1, 1, 2};
  const auto t = full_spectrum(two, 2);
  CHECK(t[0] == doctest::Approx(1.0));
  CHECK(t[1] == doctest::Approx(3.0));

  const auto p3 = full_spectrum(path_graph(3));
  CHECK(p3[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(std::abs(p3[1]) < 1e-12);
  CHECK(p3[2] == doctest::Approx(std::sqrt(2.0)));

  const auto kn = full_spectrum(complete_graph(6, false));
  CHECK(kn.back() == doctest::Approx(5.0));
  for (int i = 0; i < 5; ++i) CHECK(kn[static_cast<std::size_t>(i)] == doctest::Approx(-1.0));

  std::vector<double> vecs;
  const auto tri = tridiagonal_eigen({2, 2, 2}, {1, 1}, &vecs);
  CHECK(tri[0] == doctest::Approx(2 - std::sqrt(2.0)));
  CHECK(tri[2] == doctest::Approx(2 + std::sqrt(2.0)));
  CHECK(vecs.size() == 9);
}

TEST_CASE("lambda1") {
  CHECK(lambda1(path_graph(3)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(lambda1(complete_graph(30, true)) == doctest::Approx(30.0).epsilon(1e-10));
  CHECK(lambda1(complete_graph(30, false)) == doctest::Approx(29.0).epsilon(1e-10));
  for (int k : {1, 4, 9, 50}) {
    Edges star;
    for (int i = 1; i <= k; ++i) star.emplace_back(0, i);
    CHECK(lambda1(AdjacencyMatrix::from_edges(k + 1, false, star)) == doctest::Approx(std::sqrt(k)).epsilon(1e-10));
  }
  CHECK(lambda1(AdjacencyMatrix::from_edges(10, false, Edges{})) == 0.0);

  const auto g = sample_adjacency(1000, 1 / std::sqrt(1000.0), true, {.master_seed = 42, .replicate_index = 0});
  const Lambda1Result res = lambda1_detailed(g);
  CHECK(res.residual <= 1e-10 * g.norm1());
  CHECK(res.value > 25.0);
  CHECK(res.value < 40.0);
}

TEST_CASE("spectrum crosscheck") {
  CHECK(spectrum_crosscheck(path_graph(3), 2));
  for (std::uint64_t r = 0; r < 5; ++r)
    for (double p : {0.05, 0.2, 0.5}) {
      const auto a = sample_adjacency(60, p, r % 2 == 0, {.master_seed = 3, .replicate_index = r});
      CHECK(spectrum_crosscheck(a, 1 + static_cast<int>(r % 4)));
    }
}
