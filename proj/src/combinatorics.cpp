#include "rmtlab/combinatorics.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

namespace rmtlab::combinatorics {

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is C(n-k+i, i) here
  }
  return result;
}

BigInt catalan(std::int64_t m) {
  if (m < 0) throw std::invalid_argument("catalan: m must be nonnegative");
  return binomial(2 * m, m) / (m + 1);
}

BigInt sigma(std::int64_t m, std::int64_t n) {
  if (m < 0 || n < 0) throw std::invalid_argument("sigma: arguments must be nonnegative");
  if (m + n == 0) throw std::invalid_argument("sigma: m + n must be positive");
  return binomial(m + 2 * n - 1, n) - binomial(m + 2 * n - 1, n - 2);
}

BigInt sigma_bruteforce(std::int64_t m, std::int64_t n) {
  if (m < 0 || n < 0) throw std::invalid_argument("sigma_bruteforce: arguments must be nonnegative");
  if (m + n == 0) throw std::invalid_argument("sigma_bruteforce: m + n must be positive");
  const std::int64_t length = m + 2 * n;
  if (length > kSigmaEnumerationLimit)
    throw std::length_error("sigma_bruteforce: sequence length " + std::to_string(length) +
                            " exceeds enumeration limit");

  // Bit i set means step i is -1. Walk all masks with popcount n (Gosper).
  std::uint64_t count = 0;
  const std::uint64_t end = std::uint64_t{1} << length;
  std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  while (mask < end) {
    std::int64_t partial = 0;
    bool ok = true;
    for (std::int64_t i = 0; i < length && ok; ++i) {
      partial += ((mask >> i) & 1u) ? -1 : 1;
      ok = partial >= 0;
    }
    if (ok) ++count;
    if (mask == 0) break;
    const std::uint64_t low = mask & -mask;
    const std::uint64_t ripple = mask + low;
    mask = ripple | (((mask ^ ripple) >> 2) / low);
  }
  return count;
}

BigInt catalan_convolution(std::int64_t m, std::int64_t s, int min_part) {
  if (m < 0 || s < 0) throw std::invalid_argument("catalan_convolution: arguments must be nonnegative");
  if (min_part != 0 && min_part != 1)
    throw std::invalid_argument("catalan_convolution: min_part must be 0 or 1");

  std::vector<BigInt> cat(static_cast<std::size_t>(m) + 1);
  for (std::int64_t i = 0; i <= m; ++i) cat[static_cast<std::size_t>(i)] = catalan(i);

  // ways[r]: weighted compositions of r using the parts placed so far.
  std::vector<BigInt> ways(static_cast<std::size_t>(m) + 1, 0);
  ways[0] = 1;
  for (std::int64_t part = 0; part < s; ++part) {
    std::vector<BigInt> next(ways.size(), 0);
    for (std::int64_t r = 0; r <= m; ++r) {
      if (ways[static_cast<std::size_t>(r)] == 0) continue;
      for (std::int64_t x = min_part; r + x <= m; ++x)
        next[static_cast<std::size_t>(r + x)] +=
            ways[static_cast<std::size_t>(r)] * cat[static_cast<std::size_t>(x)];
    }
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(m)];
}

bool catalan_product_identity_holds(std::int64_t m, std::int64_t s) {
  if (s < 1) throw std::invalid_argument("catalan_product_identity_holds: s must be positive");
  return catalan_convolution(m, s, 0) == catalan(m + s - 1);
}

}  // namespace rmtlab::combinatorics
