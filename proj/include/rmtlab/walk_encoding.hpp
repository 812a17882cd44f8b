// Closed walks on labeled vertices and their marked-edge encoding.
//
// A closed walk (i_0, ..., i_{q-1}) has directed edges (i_{k-1}, i_k) for
// k = 1..q with i_q := i_0. Edge k is marked when an even number of earlier
// edges coincide with it as undirected edges; its right endpoint then gains
// one mark. Summary counts (n_k, odd-multiplicity edges) feed the counting
// lemmas checked in check_counting_lemmas().
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace rmtlab::walks {

/// Vertex labels are 1-based.
struct ClosedWalk {
  std::vector<int> vertices;

  int length() const { return static_cast<int>(vertices.size()); }
  int vertex(int k) const { return vertices[static_cast<std::size_t>(k % length())]; }
};

/// Key (min(u,v), max(u,v)); loops are (u,u).
struct UndirectedEdge {
  int lo;
  int hi;
  static UndirectedEdge of(int u, int v) { return u <= v ? UndirectedEdge{u, v} : UndirectedEdge{v, u}; }
  auto operator<=>(const UndirectedEdge&) const = default;
};

struct MarkingProfile {
  std::vector<bool> marked;            // per edge, index k-1 for edge k
  std::map<int, int> vertex_marks;     // every walk vertex, including zero counts
  std::map<int, int> n_k;              // k >= 1 -> vertices marked exactly k times
  int n0 = 0;                          // walk vertices never marked
  std::map<UndirectedEdge, int> multiplicity;
  std::set<UndirectedEdge> odd_edges;
  int distinct_edges = 0;

  int marked_count() const;
  /// Sum over k >= from of k * n_k.
  int weighted_marks(int from = 1) const;
};

/// Throws std::invalid_argument when the walk is empty or a label is outside [1, n].
void validate(const ClosedWalk& walk, int n);

MarkingProfile mark_walk(const ClosedWalk& walk);

/// Every undirected edge has multiplicity >= 2.
bool is_expectation_nonzero(const ClosedWalk& walk);
bool is_expectation_nonzero(const MarkingProfile& profile);

struct LemmaReport {
  bool tuplecond_ok = false;  // sum k n_k == (q + |O|) / 2
  bool l1_ok = true;          // meaningful only when applicable
  bool applicable = false;
};

LemmaReport check_counting_lemmas(const ClosedWalk& walk);
LemmaReport check_counting_lemmas(const ClosedWalk& walk, const MarkingProfile& profile);

/// Marked edges never fall behind unmarked ones along any prefix.
bool prefix_marks_dominate(const MarkingProfile& profile);

inline constexpr std::uint64_t kDefaultWalkBudget = 100'000'000;

struct WalkDomain {
  int n = 1;
  int q = 1;
  bool loops = true;
  std::uint64_t budget = kDefaultWalkBudget;
};

/// Streams every closed walk in lexicographic order, optionally restricted to
/// walks that start with a fixed prefix (used to shard enumeration).
/// Memory is O(q). Construction throws std::length_error if n^q exceeds the budget.
class ClosedWalkEnumerator {
 public:
  explicit ClosedWalkEnumerator(const WalkDomain& domain, std::span<const int> prefix = {});

  /// Next walk, or nullptr when exhausted. The pointer is valid until the next call.
  const ClosedWalk* next();

 private:
  bool advance();
  bool admissible() const;

  WalkDomain domain_;
  std::size_t fixed_;
  ClosedWalk current_;
  bool started_ = false;
  bool done_ = false;
};

/// n^q, saturating; throws std::length_error above the budget.
std::uint64_t check_walk_budget(const WalkDomain& domain);

void for_each_closed_walk(const WalkDomain& domain, const std::function<void(const ClosedWalk&)>& visit);

struct EncodingVerification {
  int n = 0;
  int q = 0;
  bool loops = false;
  std::uint64_t walks = 0;
  std::uint64_t applicable = 0;
  std::uint64_t tuplecond_violations = 0;
  std::uint64_t l1_violations = 0;        // even q
  std::uint64_t odd_l1_violations = 0;    // odd q
  std::uint64_t prefix_violations = 0;
  std::uint64_t marking_violations = 0;   // unmarked non-initial vertex, or edge-count bound

  std::uint64_t total_violations() const {
    return tuplecond_violations + l1_violations + odd_l1_violations + prefix_violations +
           marking_violations;
  }
};

/// Exhaustive check of every encoding invariant over all closed walks of the
/// domain, sharded by first edge over `threads` workers.
EncodingVerification verify_encoding(const WalkDomain& domain, int threads = 1);

/// Closed walks of length 2m without loops that are even (|O| = 0, nonzero
/// expectation) and have n_1 = m, counted by filtered enumeration.
std::uint64_t count_simple_even_cycles(int n, int m);

}  // namespace rmtlab::walks
