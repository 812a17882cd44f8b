// Exact tr(A^{2m}) = ||A^m||_F^2 for symmetric 0/1 matrices.
#pragma once

#include "rmtlab/adjacency.hpp"
#include "rmtlab/exact.hpp"

#include <cstdint>

namespace rmtlab::spectral {

enum class TracePath {
  automatic,  // pick the narrowest integer type that provably cannot overflow
  int64,      // 64-bit entries, 128-bit accumulation
  int128,     // 128-bit entries and accumulation
  bigint,     // arbitrary precision throughout
};

inline constexpr std::uint64_t kDefaultTraceBudget = 1'000'000'000'000ULL;

/// Exact tr(A^{2m}). A^m is formed column block by column block through
/// m - 1 sparse x dense products, so memory is O(n · block) per call.
/// The automatic path bounds entries by Δ^m and each row's squared norm by
/// Δ^{2m} (Δ = max degree) and promotes to a wider type before any overflow.
/// Forced paths skip the overflow bound. Throws std::length_error when
/// m · n · edge_count exceeds the budget.
BigInt trace_power_int(const AdjacencyMatrix& a, int m, TracePath path = TracePath::automatic,
                       std::uint64_t budget = kDefaultTraceBudget);

/// Path the automatic selector would choose.
TracePath select_trace_path(const AdjacencyMatrix& a, int m);

}  // namespace rmtlab::spectral
