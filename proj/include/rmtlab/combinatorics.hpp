// Exact Catalan, ballot-path and binomial counts.
#pragma once

#include "rmtlab/exact.hpp"

#include <cstdint>

namespace rmtlab::combinatorics {

/// C(n, k); zero whenever k < 0 or k > n.
BigInt binomial(std::int64_t n, std::int64_t k);

/// m-th Catalan number, (1/(m+1)) C(2m, m).
BigInt catalan(std::int64_t m);

/// Number of +-1 sequences with m+n ones and n minus-ones whose prefix sums
/// never go negative. Closed form C(m+2n-1, n) - C(m+2n-1, n-2).
/// Throws std::invalid_argument when m + n == 0 or either argument is negative.
BigInt sigma(std::int64_t m, std::int64_t n);

inline constexpr std::int64_t kSigmaEnumerationLimit = 24;

/// Same count as sigma() by visiting every sequence with exactly n minus-ones.
/// Throws std::length_error when m + 2n exceeds kSigmaEnumerationLimit.
BigInt sigma_bruteforce(std::int64_t m, std::int64_t n);

/// Sum of C_{m_1} ... C_{m_s} over compositions m_1 + ... + m_s = m with every
/// part >= min_part (min_part is 0 or 1). s == 0 yields 1 for m == 0, else 0.
BigInt catalan_convolution(std::int64_t m, std::int64_t s, int min_part);

/// Whether conv(m, s, 0) equals C_{m+s-1}. Only true in general for s <= 2.
bool catalan_product_identity_holds(std::int64_t m, std::int64_t s);

}  // namespace rmtlab::combinatorics
