#include "rmtlab/trace_power.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmtlab::spectral {

namespace {

constexpr int kBlock = 64;

template <typename Entry>
struct Accumulator;

template <>
struct Accumulator<std::int64_t> {
  using type = __int128;
};
template <>
struct Accumulator<__int128> {
  using type = __int128;
};
template <>
struct Accumulator<BigInt> {
  using type = BigInt;
};

// Sum of squared entries of A^m, restricted to columns [c0, c0 + width).
template <typename Entry>
void block_power_norm(const AdjacencyMatrix& a, int m, int c0, int width, std::vector<Entry>& x,
                      std::vector<Entry>& y, BigInt& total) {
  using Acc = typename Accumulator<Entry>::type;
  const int n = a.size();
  const auto stride = static_cast<std::size_t>(kBlock);

  std::fill(x.begin(), x.end(), Entry(0));
  for (int c = 0; c < width; ++c)
    for (int i : a.neighbors(c0 + c)) x[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(c)] = 1;

  for (int step = 1; step < m; ++step) {
    for (int i = 0; i < n; ++i) {
      Entry* out = y.data() + static_cast<std::size_t>(i) * stride;
      std::fill(out, out + kBlock, Entry(0));
      for (int j : a.neighbors(i)) {
        const Entry* in = x.data() + static_cast<std::size_t>(j) * stride;
        for (int c = 0; c < kBlock; ++c) out[c] += in[c];
      }
    }
    std::swap(x, y);
  }

  for (int i = 0; i < n; ++i) {
    const Entry* row = x.data() + static_cast<std::size_t>(i) * stride;
    Acc row_sum = 0;
    for (int c = 0; c < width; ++c) row_sum += static_cast<Acc>(row[c]) * static_cast<Acc>(row[c]);
    if (row_sum != 0) total += BigInt(row_sum);
  }
}

template <typename Entry>
BigInt power_norm(const AdjacencyMatrix& a, int m) {
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<Entry> x(n * kBlock), y(n * kBlock);
  BigInt total = 0;
  for (int c0 = 0; c0 < a.size(); c0 += kBlock)
    block_power_norm<Entry>(a, m, c0, std::min(kBlock, a.size() - c0), x, y, total);
  return total;
}

}  // namespace

TracePath select_trace_path(const AdjacencyMatrix& a, int m) {
  const double delta = std::max(1, a.max_degree());
  // Entries of A^m are bounded by Δ^m, and a row's squared norm by Δ^{2m}.
  const double entry_bits = m * std::log2(delta);
  if (entry_bits < 62.0 && 2.0 * entry_bits < 126.0) return TracePath::int64;
  if (2.0 * entry_bits < 126.0) return TracePath::int128;
  return TracePath::bigint;
}

BigInt trace_power_int(const AdjacencyMatrix& a, int m, TracePath path, std::uint64_t budget) {
  if (m < 1) throw std::invalid_argument("trace_power_int: m must be >= 1");
  const double work = static_cast<double>(m) * a.size() * static_cast<double>(std::max<std::int64_t>(1, a.edge_count()));
  if (work > static_cast<double>(budget))
    throw std::length_error("trace_power_int: m*n*edges = " + std::to_string(work) + " exceeds budget");
  if (a.edge_count() == 0) return 0;

  if (path == TracePath::automatic) path = select_trace_path(a, m);
  switch (path) {
    case TracePath::int64: return power_norm<std::int64_t>(a, m);
    case TracePath::int128: return power_norm<__int128>(a, m);
    default: return power_norm<BigInt>(a, m);
  }
}

}  // namespace rmtlab::spectral
