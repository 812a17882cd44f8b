// Symmetric 0/1 adjacency matrices in compressed sparse row form, and
// G(n, p) sampling from a replicate stream.
#pragma once

#include "rmtlab/rng.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rmtlab::spectral {

class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;

  /// Builds from undirected edges with 0-based endpoints. Duplicates and
  /// out-of-range endpoints throw std::invalid_argument, as do loops when
  /// `loops` is false.
  static AdjacencyMatrix from_edges(int n, bool loops, std::span<const std::pair<int, int>> edges);

  int size() const { return n_; }
  bool loops() const { return loops_; }
  /// Undirected edges, each loop counted once.
  std::int64_t edge_count() const { return edge_count_; }
  /// Stored entries (2·edges - loops).
  std::int64_t nonzeros() const { return static_cast<std::int64_t>(cols_.size()); }

  std::span<const int> neighbors(int v) const {
    return {cols_.data() + offsets_[static_cast<std::size_t>(v)],
            cols_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  int degree(int v) const {
    return static_cast<int>(offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)]);
  }
  int max_degree() const;
  /// Maximum absolute column sum.
  double norm1() const { return static_cast<double>(max_degree()); }

  /// Row-major dense copy.
  std::vector<double> dense() const;

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  bool operator==(const AdjacencyMatrix&) const = default;

 private:
  int n_ = 0;
  bool loops_ = false;
  std::int64_t edge_count_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<int> cols_;
};

/// Below this edge probability the sampler skips absent slots geometrically.
inline constexpr double kGeometricSkipThreshold = 0.01;

/// Each slot {i, j}, i < j (and i == j when loops), independently present with
/// probability p. Slots are visited in row-major order of the upper triangle.
AdjacencyMatrix sample_adjacency(int n, double p, bool loops, StreamSeed seed);

}  // namespace rmtlab::spectral
