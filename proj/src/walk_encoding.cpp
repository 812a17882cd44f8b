#include "rmtlab/walk_encoding.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace rmtlab::walks {

int MarkingProfile::marked_count() const {
  return static_cast<int>(std::count(marked.begin(), marked.end(), true));
}

int MarkingProfile::weighted_marks(int from) const {
  int total = 0;
  for (const auto& [k, count] : n_k)
    if (k >= from) total += k * count;
  return total;
}

void validate(const ClosedWalk& walk, int n) {
  if (walk.vertices.empty()) throw std::invalid_argument("closed walk must have length >= 1");
  for (int v : walk.vertices)
    if (v < 1 || v > n)
      throw std::invalid_argument("vertex label " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
}

MarkingProfile mark_walk(const ClosedWalk& walk) {
  MarkingProfile profile;
  const int q = walk.length();
  profile.marked.resize(static_cast<std::size_t>(q));
  for (int v : walk.vertices) profile.vertex_marks.try_emplace(v, 0);

  for (int k = 1; k <= q; ++k) {
    const int left = walk.vertex(k - 1);
    const int right = walk.vertex(k);
    int& seen = profile.multiplicity[UndirectedEdge::of(left, right)];
    const bool is_marked = seen % 2 == 0;
    ++seen;
    profile.marked[static_cast<std::size_t>(k - 1)] = is_marked;
    if (is_marked) ++profile.vertex_marks[right];
  }

  for (const auto& [v, marks] : profile.vertex_marks) {
    if (marks == 0)
      ++profile.n0;
    else
      ++profile.n_k[marks];
  }
  for (const auto& [edge, mult] : profile.multiplicity)
    if (mult % 2 == 1) profile.odd_edges.insert(edge);
  profile.distinct_edges = static_cast<int>(profile.multiplicity.size());
  return profile;
}

bool is_expectation_nonzero(const MarkingProfile& profile) {
  return std::all_of(profile.multiplicity.begin(), profile.multiplicity.end(),
                     [](const auto& entry) { return entry.second >= 2; });
}

bool is_expectation_nonzero(const ClosedWalk& walk) { return is_expectation_nonzero(mark_walk(walk)); }

LemmaReport check_counting_lemmas(const ClosedWalk& walk, const MarkingProfile& profile) {
  LemmaReport report;
  const int q = walk.length();
  const int odd = static_cast<int>(profile.odd_edges.size());
  report.tuplecond_ok = 2 * profile.weighted_marks(1) == q + odd;
  report.applicable = is_expectation_nonzero(profile);
  if (report.applicable) {
    const int heavy = profile.weighted_marks(2);
    if (q % 2 == 0) {
      const int o = odd / 2;
      report.l1_ok = odd % 2 == 0 && heavy >= 3 * o;
    } else {
      const int o = (odd - 1) / 2;
      report.l1_ok = odd % 2 == 1 && heavy >= 3 * o + 2;
    }
  }
  return report;
}

LemmaReport check_counting_lemmas(const ClosedWalk& walk) {
  return check_counting_lemmas(walk, mark_walk(walk));
}

bool prefix_marks_dominate(const MarkingProfile& profile) {
  int height = 0;
  for (bool m : profile.marked) {
    height += m ? 1 : -1;
    if (height < 0) return false;
  }
  return true;
}

std::uint64_t check_walk_budget(const WalkDomain& domain) {
  if (domain.n < 1 || domain.q < 1) throw std::invalid_argument("walk domain needs n >= 1 and q >= 1");
  std::uint64_t total = 1;
  for (int i = 0; i < domain.q; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(domain.n)) {
      total = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    total *= static_cast<std::uint64_t>(domain.n);
  }
  if (total > domain.budget)
    throw std::length_error("walk enumeration n^q = " + std::to_string(domain.n) + "^" +
                            std::to_string(domain.q) + " exceeds budget " + std::to_string(domain.budget));
  return total;
}

ClosedWalkEnumerator::ClosedWalkEnumerator(const WalkDomain& domain, std::span<const int> prefix)
    : domain_(domain), fixed_(prefix.size()) {
  check_walk_budget(domain_);
  if (prefix.size() > static_cast<std::size_t>(domain_.q))
    throw std::invalid_argument("walk prefix longer than q");
  current_.vertices.assign(static_cast<std::size_t>(domain_.q), 1);
  std::copy(prefix.begin(), prefix.end(), current_.vertices.begin());
  for (int v : prefix)
    if (v < 1 || v > domain_.n) throw std::invalid_argument("walk prefix label out of range");
}

bool ClosedWalkEnumerator::advance() {
  auto& v = current_.vertices;
  for (std::size_t pos = v.size(); pos-- > fixed_;) {
    if (v[pos] < domain_.n) {
      ++v[pos];
      return true;
    }
    v[pos] = 1;
  }
  return false;
}

bool ClosedWalkEnumerator::admissible() const {
  if (domain_.loops) return true;
  const int q = current_.length();
  for (int k = 0; k < q; ++k)
    if (current_.vertex(k) == current_.vertex(k + 1)) return false;
  return true;
}

const ClosedWalk* ClosedWalkEnumerator::next() {
  while (!done_) {
    if (started_ && !advance()) {
      done_ = true;
      break;
    }
    started_ = true;
    if (admissible()) return &current_;
  }
  return nullptr;
}

void for_each_closed_walk(const WalkDomain& domain, const std::function<void(const ClosedWalk&)>& visit) {
  ClosedWalkEnumerator walks(domain);
  while (const ClosedWalk* w = walks.next()) visit(*w);
}

namespace {

void tally(const ClosedWalk& walk, EncodingVerification& out) {
  const MarkingProfile profile = mark_walk(walk);
  const LemmaReport report = check_counting_lemmas(walk, profile);
  ++out.walks;
  if (!report.tuplecond_ok) ++out.tuplecond_violations;
  if (report.applicable) {
    ++out.applicable;
    if (!report.l1_ok) ++(walk.length() % 2 == 0 ? out.l1_violations : out.odd_l1_violations);
  }
  if (!prefix_marks_dominate(profile)) ++out.prefix_violations;

  bool marking_ok = profile.marked_count() == profile.weighted_marks(1);
  const int start = walk.vertices.front();
  for (const auto& [v, marks] : profile.vertex_marks)
    if (v != start && marks < 1) marking_ok = false;
  int marked_vertices = 0;
  for (const auto& [k, count] : profile.n_k) marked_vertices += count;
  if (profile.distinct_edges < marked_vertices - 1) marking_ok = false;
  if (!marking_ok) ++out.marking_violations;
}

void merge(EncodingVerification& into, const EncodingVerification& part) {
  into.walks += part.walks;
  into.applicable += part.applicable;
  into.tuplecond_violations += part.tuplecond_violations;
  into.l1_violations += part.l1_violations;
  into.odd_l1_violations += part.odd_l1_violations;
  into.prefix_violations += part.prefix_violations;
  into.marking_violations += part.marking_violations;
}

}  // namespace

EncodingVerification verify_encoding(const WalkDomain& domain, int threads) {
  check_walk_budget(domain);
  EncodingVerification total;
  total.n = domain.n;
  total.q = domain.q;
  total.loops = domain.loops;

  // Shards are first edges (i_0, i_1); q == 1 has a single shard per start.
  std::vector<std::vector<int>> shards;
  for (int a = 1; a <= domain.n; ++a) {
    if (domain.q == 1) {
      shards.push_back({a});
      continue;
    }
    for (int b = 1; b <= domain.n; ++b) shards.push_back({a, b});
  }

  std::atomic<std::size_t> cursor{0};
  std::mutex guard;
  auto worker = [&] {
    EncodingVerification local;
    for (std::size_t s = cursor++; s < shards.size(); s = cursor++) {
      ClosedWalkEnumerator walks(domain, shards[s]);
      while (const ClosedWalk* w = walks.next()) tally(*w, local);
    }
    std::lock_guard lock(guard);
    merge(total, local);
  };

  const int workers = std::max(1, threads);
  std::vector<std::jthread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return total;
}

std::uint64_t count_simple_even_cycles(int n, int m) {
  std::uint64_t count = 0;
  for_each_closed_walk({.n = n, .q = 2 * m, .loops = false}, [&](const ClosedWalk& walk) {
    const MarkingProfile profile = mark_walk(walk);
    if (!is_expectation_nonzero(profile) || !profile.odd_edges.empty()) return;
    auto it = profile.n_k.find(1);
    if (it != profile.n_k.end() && it->second == m && profile.n_k.size() == 1) ++count;
  });
  return count;
}

}  // namespace rmtlab::walks
