#include "rmtlab/verification.hpp"

#include "rmtlab/combinatorics.hpp"

#include <functional>

namespace rmtlab::experiment {

namespace comb = rmtlab::combinatorics;

bool CombinatoricsVerification::passed() const {
  return sigma_mismatches == 0 && recurrence_violations == 0 && catalan_sigma_mismatches == 0 &&
         segre_mismatches == 0 && inclusion_mismatches == 0 && composition_mismatches == 0 && identity_pattern_ok;
}

namespace {

// Sum of Catalan products by walking every composition explicitly.
BigInt composition_sum(int m, int s, int min_part) {
  BigInt total = 0;
  std::function<void(int, int, BigInt)> place = [&](int remaining, int parts_left, BigInt product) {
    if (parts_left == 0) {
      if (remaining == 0) total += product;
      return;
    }
    for (int x = min_part; x <= remaining; ++x) place(remaining - x, parts_left - 1, product * comb::catalan(x));
  };
  place(m, s, 1);
  return total;
}

}  // namespace

CombinatoricsVerification verify_combinatorics(int max_length, int max_m) {
  CombinatoricsVerification v;
  v.max_length = max_length;
  v.max_m = max_m;

  for (int n = 0; 2 * n <= max_length; ++n) {
    for (int m = 0; m + 2 * n <= max_length; ++m) {
      if (m + n == 0) continue;
      ++v.sigma_checked;
      if (comb::sigma(m, n) != comb::sigma_bruteforce(m, n)) ++v.sigma_mismatches;
      if (m >= 1 && n >= 1) {
        ++v.recurrence_checked;
        if (comb::sigma(m, n) != comb::sigma(m + 1, n - 1) + comb::sigma(m - 1, n)) ++v.recurrence_violations;
      }
      if (m == 0 && comb::sigma(0, n) != comb::catalan(n)) ++v.catalan_sigma_mismatches;
    }
  }

  for (int m = 0; m <= max_m; ++m) {
    if (comb::catalan_convolution(m, 2, 0) != comb::catalan(m + 1)) ++v.segre_mismatches;
    for (int s = 1; s <= 4; ++s) {
      BigInt expanded = 0;
      for (int j = 0; j <= s; ++j) expanded += comb::binomial(s, j) * comb::catalan_convolution(m, s - j, 1);
      if (expanded != comb::catalan_convolution(m, s, 0)) ++v.inclusion_mismatches;
      for (int min_part : {0, 1})
        if (composition_sum(m, s, min_part) != comb::catalan_convolution(m, s, min_part)) ++v.composition_mismatches;
    }
  }

  bool pattern = true;
  for (int s = 1; s <= 4; ++s) {
    for (int m = 0; m <= max_m; ++m) {
      CatalanIdentityRow row{.m = m,
                             .s = s,
                             .convolution = comb::catalan_convolution(m, s, 0),
                             .claimed = comb::catalan(m + s - 1),
                             .holds = false};
      row.holds = row.convolution == row.claimed;
      if (s <= 2 && !row.holds) pattern = false;
      if (m == 1 && s == 3 && row.holds) pattern = false;
      v.identity_rows.push_back(std::move(row));
    }
  }
  v.identity_pattern_ok = pattern;
  return v;
}

void print(const CombinatoricsVerification& v, std::ostream& out) {
  out << "sigma vs enumeration (m+2n <= " << v.max_length << "): " << v.sigma_checked << " checked, "
      << v.sigma_mismatches << " mismatches\n";
  out << "sigma recurrence: " << v.recurrence_checked << " checked, " << v.recurrence_violations << " violations\n";
  out << "sigma(0,n) = C_n mismatches: " << v.catalan_sigma_mismatches << "\n";
  out << "conv(m,2,0) = C_{m+1} (m <= " << v.max_m << ") mismatches: " << v.segre_mismatches << "\n";
  out << "zero-part expansion mismatches: " << v.inclusion_mismatches << "\n";
  out << "DP vs composition enumeration mismatches: " << v.composition_mismatches << "\n";
  out << "identity conv(m,s,0) = C_{m+s-1}:\n";
  for (int s = 1; s <= 4; ++s) {
    int holds = 0, total = 0;
    for (const auto& row : v.identity_rows)
      if (row.s == s) {
        ++total;
        holds += row.holds ? 1 : 0;
      }
    out << "  s=" << s << ": holds for " << holds << "/" << total << " values of m\n";
  }
  for (const auto& row : v.identity_rows)
    if (row.m == 1 && row.s == 3)
      out << "  (m=1, s=3): convolution " << row.convolution << " vs C_3 = " << row.claimed << " -> "
          << (row.holds ? "holds" : "fails") << "\n";
  out << "combinatorics: " << (v.passed() ? "PASS" : "FAIL") << "\n";
}

std::vector<walks::EncodingVerification> verify_encoding_sweep(int n, int q, const std::vector<bool>& loop_settings,
                                                               int threads) {
  std::vector<walks::EncodingVerification> out;
  for (bool loops : loop_settings)
    for (int nn = 1; nn <= n; ++nn)
      for (int qq = 1; qq <= q; ++qq) out.push_back(walks::verify_encoding({.n = nn, .q = qq, .loops = loops}, threads));
  return out;
}

void print(const walks::EncodingVerification& v, std::ostream& out) {
  out << "n=" << v.n << " q=" << v.q << " loops=" << (v.loops ? "true" : "false") << ": walks=" << v.walks
      << " applicable=" << v.applicable << " tuple=" << v.tuplecond_violations << " l1=" << v.l1_violations
      << " odd=" << v.odd_l1_violations << " prefix=" << v.prefix_violations << " marking=" << v.marking_violations
      << "\n";
}

bool OracleVerification::passed() const {
  for (const auto& row : rows)
    if (!row.agree) return false;
  return !rows.empty();
}

OracleVerification verify_oracles(int n, int q_max, const Rational& p, bool loops, int threads) {
  OracleVerification v{.n = n, .q_max = q_max, .p = p, .loops = loops, .rows = {}};
  for (const auto& r : oracles::config_moments(n, q_max, p, loops, threads)) {
    OracleRow row{.q = r.q,
                  .kind = r.kind,
                  .config_expectation = r.expectation,
                  .walk_expectation = oracles::walk_expectation(n, r.q, p, loops, r.kind),
                  .variance = r.variance.value_or(Rational(0)),
                  .agree = false};
    row.agree = row.walk_expectation == row.config_expectation;
    v.rows.push_back(std::move(row));
  }
  return v;
}

void write_oracle_csv(const OracleVerification& v, std::ostream& out) {
  out << "q,kind,expectation,variance,walk_expectation,agree\n";
  for (const auto& row : v.rows)
    out << row.q << ',' << oracles::to_string(row.kind) << ',' << to_string(row.config_expectation) << ','
        << to_string(row.variance) << ',' << to_string(row.walk_expectation) << ',' << (row.agree ? "true" : "false")
        << '\n';
}

}  // namespace rmtlab::experiment
