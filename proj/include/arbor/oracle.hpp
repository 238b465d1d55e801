#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arbor/common.hpp"
#include "arbor/neighbor_heap.hpp"
#include "arbor/oriented_graph.hpp"

namespace arbor::oracle {

/// Undirected simple graph given by an edge list.
struct StaticGraph {
  std::size_t n = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;

  static StaticGraph from(const OrientedGraph& g);
};

/// n limit for the exponential routines; ARBOR_ORACLE_LIMIT overrides the
/// default of 16. Values above 24 are clamped.
std::size_t oracle_limit();

/// max over U with |U| >= 2 of ceil(|E(U)| / (|U| - 1)), and 1 for an
/// edgeless graph. Throws TOO_LARGE above oracle_limit().
std::uint32_t arboricity_exact(const StaticGraph& g);

/// Smallest d such that some orientation has every out-degree <= d, by
/// binary search over d with a bipartite max-flow feasibility test.
std::uint32_t min_max_outdegree(const StaticGraph& g);

/// beta * alpha + ceil(log_beta n). Requires beta > 1 and n >= 2.
double theorem2_bound(std::uint32_t alpha, double beta, std::size_t n);

/// Smallest k >= 0 with beta^k >= n.
std::uint32_t ceil_log(double beta, std::size_t n);

// ---------------------------------------------------------------------------
// Reference heap: linear-scan semantics of NeighborHeap, errors included.

class ReferenceHeap {
 public:
  explicit ReferenceHeap(Key center_key = 0) : center_key_(center_key) {}

  void insert(Vertex id, Key key);
  void erase(Vertex id);
  void increment(Vertex id);
  void decrement(Vertex id);
  void increment_center();
  void decrement_center();
  /// Maximum key among elements with key >= k0 + 2.
  std::optional<Key> report_max() const { return max_at_least(center_key_ + 2); }
  /// Maximum key among elements with key >= k0 + 1.
  std::optional<Key> report_max_above_center() const { return max_at_least(center_key_ + 1); }

  Key center_key() const { return center_key_; }
  std::size_t size() const { return keys_.size(); }
  const std::map<Vertex, Key>& contents() const { return keys_; }

 private:
  std::optional<Key> max_at_least(Key threshold) const;
  Key& live(Vertex id);

  Key center_key_;
  std::map<Vertex, Key> keys_;
};

enum class HeapOpKind {
  insert,
  erase,
  increment,
  decrement,
  increment_center,
  decrement_center,
  report_max,
  report_max_above_center,
};

struct HeapOp {
  HeapOpKind kind;
  Vertex id = 0;
  Key key = 0;
};

/// What one operation made observable. The content digest is an
/// order-independent hash of the (id, key) multiset after the operation.
struct HeapObservation {
  std::optional<ErrorCode> error;
  std::optional<Key> max_key;
  std::size_t size = 0;
  Key center_key = 0;
  std::uint64_t digest = 0;

  friend bool operator==(const HeapObservation&, const HeapObservation&) = default;
};

std::string describe(const HeapOp& op);
std::string describe(const HeapObservation& obs);

std::vector<HeapObservation> reference_heap_replay(Key center_key, const std::vector<HeapOp>& ops);
/// Replays against NeighborHeap, addressing elements by the last handle
/// returned for each id (so operations on erased ids use stale handles).
std::vector<HeapObservation> neighbor_heap_replay(Key center_key, const std::vector<HeapOp>& ops);

/// Random mix of mostly valid operations over a small id pool, with a share
/// of deliberate precondition violations.
std::vector<HeapOp> random_heap_ops(std::size_t count, std::uint64_t seed, Vertex id_pool = 48);

// ---------------------------------------------------------------------------
// Exhaustive search over small update sequences.

struct Update {
  bool insert = true;
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Update&, const Update&) = default;
};

struct SearchVariant {
  Variant variant = Variant::naive;
  std::uint32_t alpha = 1;
  double beta = 2.0;

  std::string name() const;
};

struct Witness {
  std::size_t n = 0;
  std::vector<Update> trace;
  std::uint32_t flips = 0;      // flips in the final update of the trace
  std::uint32_t delta_run = 0;  // largest out-degree seen along the trace
};

struct Violation {
  std::string what;
  Witness trace;
};

struct SearchResult {
  SearchVariant variant;
  std::uint64_t sequences = 0;  // update sequences examined (tree nodes)
  Witness best_insert;
  Witness best_delete;
  std::vector<Violation> violations;

  std::uint32_t best_flips() const { return std::max(best_insert.flips, best_delete.flips); }
};

struct SearchOptions {
  std::size_t max_n = 4;
  std::size_t max_ops = 8;
  /// Skip states already expanded with at least as many remaining updates.
  /// Sound for finding witnesses, but no longer exhaustive: two states with
  /// equal lists may differ in heap-internal tie order.
  bool memoize = false;
  std::vector<SearchVariant> variants = default_variants();
  Fault fault = Fault::none;
  std::size_t max_violations = 8;

  static std::vector<SearchVariant> default_variants();
};

/// Enumerates every update sequence on n = 2..max_n vertices of length
/// <= max_ops, checking invariants, flip bound, the out-degree bound and
/// the optimality floor after each update.
std::vector<SearchResult> adversarial_search(const SearchOptions& options);

}  // namespace arbor::oracle
