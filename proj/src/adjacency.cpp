#include "rmtlab/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmtlab::spectral {

AdjacencyMatrix AdjacencyMatrix::from_edges(int n, bool loops, std::span<const std::pair<int, int>> edges) {
  if (n < 1) throw std::invalid_argument("adjacency matrix needs n >= 1");
  AdjacencyMatrix a;
  a.n_ = n;
  a.loops_ = loops;
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v && !loops) throw std::invalid_argument("loop at " + std::to_string(u) + " but loops disabled");
    rows[static_cast<std::size_t>(u)].push_back(v);
    if (u != v) rows[static_cast<std::size_t>(v)].push_back(u);
  }
  a.offsets_.assign(1, 0);
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::invalid_argument("duplicate edge in adjacency input");
    a.cols_.insert(a.cols_.end(), row.begin(), row.end());
    a.offsets_.push_back(static_cast<std::int64_t>(a.cols_.size()));
  }
  a.edge_count_ = static_cast<std::int64_t>(edges.size());
  return a;
}

int AdjacencyMatrix::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

std::vector<double> AdjacencyMatrix::dense() const {
  const auto un = static_cast<std::size_t>(n_);
  std::vector<double> out(un * un, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j : neighbors(i)) out[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = 1.0;
  return out;
}

void AdjacencyMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int j : neighbors(i)) acc += x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

AdjacencyMatrix sample_adjacency(int n, double p, bool loops, StreamSeed seed) {
  if (n < 1) throw std::invalid_argument("sample_adjacency: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_adjacency: p outside [0, 1]");

  ReplicateStream stream(seed);
  std::vector<std::pair<int, int>> edges;
  const auto un = static_cast<std::int64_t>(n);
  const std::int64_t slots = loops ? un * (un + 1) / 2 : un * (un - 1) / 2;

  if (p > 0.0 && p < kGeometricSkipThreshold) {
    edges.reserve(static_cast<std::size_t>(static_cast<double>(slots) * p * 1.2) + 16);
    const double log_q = std::log1p(-p);
    // Row cursor: slots of row i are [row_start, row_start + row_len).
    int row = 0;
    std::int64_t row_start = 0;
    auto row_len = [&](int i) { return loops ? un - i : un - i - 1; };
    std::int64_t slot = -1;
    while (true) {
      const double skip = std::floor(std::log(stream.next_open_closed()) / log_q);
      if (skip >= static_cast<double>(slots - slot - 1)) break;
      slot += 1 + static_cast<std::int64_t>(skip);
      while (slot >= row_start + row_len(row)) {
        row_start += row_len(row);
        ++row;
      }
      const auto col = static_cast<int>(slot - row_start + (loops ? row : row + 1));
      edges.emplace_back(row, col);
    }
  } else if (p > 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = loops ? i : i + 1; j < n; ++j)
        if (stream.next_double() < p) edges.emplace_back(i, j);
  }
  return AdjacencyMatrix::from_edges(n, loops, edges);
}

}  // namespace rmtlab::spectral
