// Exhaustive verification suites behind the verify-* subcommands.
#pragma once

#include "rmtlab/exact.hpp"
#include "rmtlab/exact_oracles.hpp"
#include "rmtlab/walk_encoding.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace rmtlab::experiment {

struct CatalanIdentityRow {
  int m = 0;
  int s = 0;
  BigInt convolution;   // sum over compositions of m into s parts >= 0
  BigInt claimed;       // C_{m+s-1}
  bool holds = false;
};

struct CombinatoricsVerification {
  int max_length = 0;
  int max_m = 0;
  std::uint64_t sigma_checked = 0;
  std::uint64_t sigma_mismatches = 0;
  std::uint64_t recurrence_checked = 0;
  std::uint64_t recurrence_violations = 0;
  std::uint64_t catalan_sigma_mismatches = 0;   // sigma(0, n) vs C_n
  std::uint64_t segre_mismatches = 0;           // conv(m, 2, 0) vs C_{m+1}
  std::uint64_t inclusion_mismatches = 0;       // zero-part expansion of conv(m, s, 0)
  std::uint64_t composition_mismatches = 0;     // DP vs explicit composition sums
  std::vector<CatalanIdentityRow> identity_rows;
  bool identity_pattern_ok = false;             // holds for s <= 2, fails at (m=1, s=3)

  bool passed() const;
};

/// sigma against enumeration for all m + 2n <= max_length, recurrence on the
/// same grid, Catalan convolution identities for m <= max_m and s <= 4.
CombinatoricsVerification verify_combinatorics(int max_length = 20, int max_m = 10);
void print(const CombinatoricsVerification& v, std::ostream& out);

/// verify_encoding over every n' <= n, q' <= q for the given loop settings.
std::vector<walks::EncodingVerification> verify_encoding_sweep(int n, int q, const std::vector<bool>& loop_settings,
                                                               int threads = 1);
void print(const walks::EncodingVerification& v, std::ostream& out);

struct OracleRow {
  int q = 0;
  oracles::MatrixKind kind = oracles::MatrixKind::raw;
  Rational config_expectation;
  Rational walk_expectation;
  Rational variance;
  bool agree = false;
};

struct OracleVerification {
  int n = 0;
  int q_max = 0;
  Rational p;
  bool loops = true;
  std::vector<OracleRow> rows;
  bool passed() const;
};

OracleVerification verify_oracles(int n, int q_max, const Rational& p, bool loops, int threads = 1);

/// q,kind,expectation,variance,walk_expectation,agree with exact fractions.
void write_oracle_csv(const OracleVerification& v, std::ostream& out);

}  // namespace rmtlab::experiment
