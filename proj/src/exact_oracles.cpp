#include "rmtlab/exact_oracles.hpp"

#include "rmtlab/bernoulli_moments.hpp"
#include "rmtlab/combinatorics.hpp"
#include "rmtlab/walk_encoding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rmtlab::oracles {

namespace mp = boost::multiprecision;

std::string_view to_string(MatrixKind kind) { return kind == MatrixKind::raw ? "raw" : "centered"; }

namespace {

void require_probability(const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("p outside [0, 1]: " + rmtlab::to_string(p));
}

// Sorted edge multiplicities; walks with equal signatures have equal expectations.
using Signature = std::vector<int>;

}  // namespace

Rational walk_expectation(int n, int q, const Rational& p, bool loops, MatrixKind kind, std::uint64_t budget) {
  require_probability(p);
  std::map<Signature, std::uint64_t> classes;
  walks::for_each_closed_walk({.n = n, .q = q, .loops = loops, .budget = budget},
                              [&](const walks::ClosedWalk& w) {
                                const auto profile = walks::mark_walk(w);
                                Signature sig;
                                sig.reserve(profile.multiplicity.size());
                                for (const auto& [edge, mult] : profile.multiplicity) sig.push_back(mult);
                                std::sort(sig.begin(), sig.end());
                                ++classes[sig];
                              });

  Rational total = 0;
  for (const auto& [sig, count] : classes) {
    Rational term = 1;
    if (kind == MatrixKind::raw) {
      term = pow(p, static_cast<unsigned>(sig.size()));
    } else {
      for (int mult : sig) term *= moments::centered_moment(mult, p);
    }
    total += term * count;
  }
  return total;
}

namespace {

int slot_count(int n, bool loops) { return loops ? n * (n + 1) / 2 : n * (n - 1) / 2; }

// Per-q sums of tr and tr^2, bucketed by number of present edges.
struct Moments {
  std::vector<std::vector<BigInt>> s1;  // [q][present]
  std::vector<std::vector<BigInt>> s2;
  Moments(int q_max, int slots)
      : s1(static_cast<std::size_t>(q_max) + 1, std::vector<BigInt>(static_cast<std::size_t>(slots) + 1)),
        s2(s1) {}
  void add(const Moments& o) {
    for (std::size_t q = 0; q < s1.size(); ++q)
      for (std::size_t k = 0; k < s1[q].size(); ++k) {
        s1[q][k] += o.s1[q][k];
        s2[q][k] += o.s2[q][k];
      }
  }
};

template <typename Scalar>
using Dense = std::vector<Scalar>;

// tr(M^q) for q = 1..q_max of an n x n matrix.
template <typename Scalar>
void power_traces(const Dense<Scalar>& m, int n, int q_max, std::vector<Scalar>& traces) {
  const auto un = static_cast<std::size_t>(n);
  Dense<Scalar> power = m;
  Dense<Scalar> next(un * un);
  traces.assign(static_cast<std::size_t>(q_max) + 1, Scalar(0));
  for (int q = 1; q <= q_max; ++q) {
    Scalar tr = 0;
    for (std::size_t i = 0; i < un; ++i) tr += power[i * un + i];
    traces[static_cast<std::size_t>(q)] = tr;
    if (q == q_max) break;
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) {
        Scalar acc = 0;
        for (std::size_t k = 0; k < un; ++k) acc += power[i * un + k] * m[k * un + j];
        next[i * un + j] = acc;
      }
    std::swap(power, next);
  }
}

// Entries of the scaled centered matrix are d·a - c with p = c/d, so every
// power stays integral. Raw entries are a itself.
template <typename Scalar>
void accumulate_configs(int n, int q_max, bool loops, const BigInt& num, const BigInt& den,
                        std::uint64_t first, std::uint64_t last, Moments& raw, Moments& centered) {
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = loops ? i : i + 1; j < un; ++j) slots.emplace_back(i, j);

  const Scalar present = static_cast<Scalar>(den - num);
  const Scalar absent = static_cast<Scalar>(-num);
  Dense<Scalar> a(un * un), c(un * un);
  std::vector<Scalar> traces;
  for (std::uint64_t config = first; config < last; ++config) {
    std::fill(a.begin(), a.end(), Scalar(0));
    std::fill(c.begin(), c.end(), absent);
    if (!loops)
      for (std::size_t i = 0; i < un; ++i) c[i * un + i] = 0;  // diagonal is identically zero
    int edges = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (!((config >> s) & 1u)) continue;
      ++edges;
      const auto [i, j] = slots[s];
      a[i * un + j] = a[j * un + i] = 1;
      c[i * un + j] = c[j * un + i] = present;
    }
    const auto k = static_cast<std::size_t>(edges);
    power_traces(a, n, q_max, traces);
    for (int q = 1; q <= q_max; ++q) {
      const BigInt t(traces[static_cast<std::size_t>(q)]);
      raw.s1[static_cast<std::size_t>(q)][k] += t;
      raw.s2[static_cast<std::size_t>(q)][k] += t * t;
    }
    power_traces(c, n, q_max, traces);
    for (int q = 1; q <= q_max; ++q) {
      const BigInt t(traces[static_cast<std::size_t>(q)]);
      centered.s1[static_cast<std::size_t>(q)][k] += t;
      centered.s2[static_cast<std::size_t>(q)][k] += t * t;
    }
  }
}

}  // namespace

std::vector<OracleResult> config_moments(int n, int q_max, const Rational& p, bool loops, int threads) {
  require_probability(p);
  if (n < 1 || q_max < 1) throw std::invalid_argument("config_moments: need n >= 1 and q_max >= 1");
  const int slots = slot_count(n, loops);
  if (slots > kMaxConfigSlots)
    throw std::length_error("config_moments: " + std::to_string(slots) + " edge slots exceed limit " +
                            std::to_string(kMaxConfigSlots));

  const BigInt num = mp::numerator(p);
  const BigInt den = mp::denominator(p);
  // |entries of C^q| <= (n·den)^q; int128 holds traces and their partial sums
  // whenever q_max·log2(n·den) stays well under 127 bits.
  const double bits = q_max * std::log2(static_cast<double>(n) * to_double(den));
  const bool fits128 = bits < 120.0;

  const std::uint64_t configs = std::uint64_t{1} << slots;
  Moments raw(q_max, slots), centered(q_max, slots);
  std::mutex guard;
  std::atomic<std::uint64_t> cursor{0};
  constexpr std::uint64_t kChunk = 256;
  auto worker = [&] {
    Moments local_raw(q_max, slots), local_centered(q_max, slots);
    for (std::uint64_t start = cursor.fetch_add(kChunk); start < configs; start = cursor.fetch_add(kChunk)) {
      const std::uint64_t stop = std::min(configs, start + kChunk);
      if (fits128)
        accumulate_configs<__int128>(n, q_max, loops, num, den, start, stop, local_raw, local_centered);
      else
        accumulate_configs<BigInt>(n, q_max, loops, num, den, start, stop, local_raw, local_centered);
    }
    std::lock_guard lock(guard);
    raw.add(local_raw);
    centered.add(local_centered);
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < std::max(1, threads); ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<Rational> weight(static_cast<std::size_t>(slots) + 1);
  for (int k = 0; k <= slots; ++k)
    weight[static_cast<std::size_t>(k)] =
        pow(p, static_cast<unsigned>(k)) * pow(Rational(1 - p), static_cast<unsigned>(slots - k));

  std::vector<OracleResult> results;
  for (int q = 1; q <= q_max; ++q) {
    for (MatrixKind kind : {MatrixKind::raw, MatrixKind::centered}) {
      const Moments& m = kind == MatrixKind::raw ? raw : centered;
      Rational first = 0, second = 0;
      for (int k = 0; k <= slots; ++k) {
        first += weight[static_cast<std::size_t>(k)] * m.s1[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
        second += weight[static_cast<std::size_t>(k)] * m.s2[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
      }
      if (kind == MatrixKind::centered) {
        const BigInt scale = mp::pow(den, static_cast<unsigned>(q));
        first /= scale;
        second /= scale * scale;
      }
      results.push_back({.n = n,
                         .q = q,
                         .p = p,
                         .loops = loops,
                         .kind = kind,
                         .expectation = first,
                         .variance = second - first * first});
    }
  }
  return results;
}

bool oracle_crosscheck(int n, int q, const Rational& p, bool loops) {
  const auto table = config_moments(n, q, p, loops);
  for (const OracleResult& r : table) {
    if (r.q != q) continue;
    if (walk_expectation(n, q, p, loops, r.kind) != r.expectation) return false;
  }
  return true;
}

bool simple_cycle_lower_bound_check(int n, int m, const Rational& p, bool loops) {
  if (p * 2 > 1 || p < 0) throw std::invalid_argument("simple_cycle_lower_bound_check: requires 0 <= p <= 1/2");
  if (m < 1 || n < m + 1) throw std::invalid_argument("simple_cycle_lower_bound_check: requires m >= 1, n >= m + 1");
  Rational bound = Rational(combinatorics::catalan(m)) * pow(Rational(p * (1 - p)), static_cast<unsigned>(m));
  for (int i = 0; i <= m; ++i) bound *= n - i;
  return walk_expectation(n, 2 * m, p, loops, MatrixKind::centered) >= bound;
}

}  // namespace rmtlab::oracles
