// Exact expectations of tr(A^q) and tr(Ã^q), Ã = A - p·11ᵀ, for small n.
//
// Two independent routes:
//  * walk_expectation sums over closed walks, factorizing each walk's
//    expectation over its distinct undirected edges;
//  * config_moments enumerates all 2^slots edge configurations and takes
//    exact integer matrix powers.
#pragma once

#include "rmtlab/exact.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace rmtlab::oracles {

enum class MatrixKind { raw, centered };

std::string_view to_string(MatrixKind kind);

struct OracleResult {
  int n = 0;
  int q = 0;
  Rational p;
  bool loops = true;
  MatrixKind kind = MatrixKind::raw;
  Rational expectation;
  std::optional<Rational> variance;
};

inline constexpr int kMaxConfigSlots = 16;

/// Sum over closed walks. Raw: sum of p^{distinct edges}. Centered: product of
/// centered moments over edge multiplicities. Throws std::length_error past the
/// walk budget.
Rational walk_expectation(int n, int q, const Rational& p, bool loops, MatrixKind kind,
                          std::uint64_t budget = 100'000'000);

/// Exact E and Var of tr(M^q) for q = 1..q_max and both kinds, ordered by q
/// then kind (raw first). Requires n(n±1)/2 <= kMaxConfigSlots.
std::vector<OracleResult> config_moments(int n, int q_max, const Rational& p, bool loops, int threads = 1);

/// Walk and configuration routes agree exactly for both kinds.
bool oracle_crosscheck(int n, int q, const Rational& p, bool loops);

/// E[tr(Ã^{2m})] >= C_m (p(1-p))^m · n(n-1)...(n-m). Requires p <= 1/2, n >= m+1.
bool simple_cycle_lower_bound_check(int n, int m, const Rational& p, bool loops = true);

}  // namespace rmtlab::oracles
