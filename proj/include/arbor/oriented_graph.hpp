#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arbor/common.hpp"
#include "arbor/neighbor_heap.hpp"

namespace arbor {

enum class Variant { naive, spectrum };

enum class EdgeEventKind { added, removed, flipped };

/// For `flipped`, `arc` is the new orientation; the old one is its reverse.
struct EdgeEvent {
  EdgeEventKind kind;
  EdgeId edge;
  Arc arc;
};

using EdgeObserver = std::function<void(const EdgeEvent&)>;
using Subscription = std::uint64_t;

/// Instrumentation for the worst-case work claims. Every field counts
/// primitive steps performed by one public update.
struct WorkCounters {
  std::uint64_t list_scanned = 0;    // out-list entries examined for violation
  std::uint64_t list_splices = 0;    // O(1) list relinks
  std::uint64_t heap_updates = 0;    // insert/erase/increment/decrement
  std::uint64_t center_updates = 0;  // increment_center/decrement_center
  std::uint64_t heap_queries = 0;    // report_max calls
  std::uint64_t max_scan_per_step = 0;
  std::uint64_t max_splices_per_step = 0;

  std::uint64_t total() const {
    return list_scanned + list_splices + heap_updates + center_updates + heap_queries;
  }
};

struct UpdateStats {
  std::uint32_t flips = 0;
  /// Invocations of the insert/delete procedure, including the top-level one.
  std::uint32_t recursion_depth = 0;
  std::uint32_t max_out_degree_after = 0;
  /// Largest out-degree seen at any point during the update.
  std::uint32_t peak_out_degree = 0;
  /// Flip steps that break the degree pattern of a correct chain: a gap of
  /// exactly 2 and unit steps along the chain (naive), or a gap of at least 2
  /// and strictly monotone steps (spectrum). Always 0 for a correct run.
  std::uint32_t chain_anomalies = 0;
  WorkCounters work;
  std::chrono::nanoseconds elapsed{0};
};

/// Deliberate defects for mutation testing of the validators. Production code
/// never sets anything but `none`.
enum class Fault {
  none,
  insert_skip_scan,          // never look for a violated out-edge
  insert_skip_key_update,    // skip the per-out-neighbor key increments
  insert_reverse_orientation,// orient new edges from the larger out-degree
  delete_skip_flip,          // ignore violated in-edges after a removal
  delete_skip_key_update,    // skip the per-out-neighbor key decrements
  spectrum_skip_move_front,  // keep scanned edges in place, append new edge
  spectrum_scan_front,       // scan the first gamma-1 entries instead of the last
  spectrum_delete_append,    // put the flipped copy at the back of the list
};

std::string_view to_string(Fault f);
Fault fault_from_string(std::string_view name);
std::span<const Fault> all_faults();

struct ValidationReport {
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void merge(const ValidationReport& other) {
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  }
};

class OrientedGraph;
ValidationReport validate_structure(const OrientedGraph& g);

/// Dynamic simple graph on a fixed vertex set with an explicit orientation.
///
/// Each vertex w owns a NeighborHeap whose center key is dg(w) and whose
/// elements are the in-neighbors of w keyed by their own out-degrees, and an
/// ordered out-edge list. After every public update all edges satisfy
/// dg(tail) <= dg(head) + 1 (naive variant) or every out-list is block-valid
/// (spectrum variant, see SpectrumGraph).
///
/// Observers are notified after the update completes. An insertion reports
/// `added` ahead of the flips it caused; a deletion reports its flips first
/// and `removed` last, so every flip is already known when a removal is seen.
/// A copy of a graph carries no observers.
class OrientedGraph {
 public:
  explicit OrientedGraph(std::size_t n);

  /// Builds a graph with exactly the given orientation and list order,
  /// bypassing the update algorithms. Heaps and counters are made consistent;
  /// no invariant on the orientation is enforced.
  static OrientedGraph from_arcs(std::size_t n, std::span<const Arc> arcs);

  OrientedGraph(const OrientedGraph&) = default;
  OrientedGraph& operator=(const OrientedGraph&) = default;
  OrientedGraph(OrientedGraph&&) noexcept = default;
  OrientedGraph& operator=(OrientedGraph&&) noexcept = default;
  ~OrientedGraph() = default;

  UpdateStats insert_edge(Vertex u, Vertex v);
  UpdateStats delete_edge(Vertex u, Vertex v);

  std::size_t vertex_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return index_.size(); }
  Variant variant() const noexcept { return variant_; }

  std::uint32_t out_degree(Vertex u) const;
  std::uint32_t max_out_degree() const noexcept { return max_degree_; }
  /// Throws NO_SUCH_EDGE if {u,v} is absent.
  Arc orientation_of(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const;
  EdgeId edge_id(Vertex u, Vertex v) const;
  Arc arc(EdgeId e) const { return {edges_[e].tail, edges_[e].head}; }

  /// Out-edges of u in list order.
  std::vector<EdgeId> out_edges(Vertex u) const;
  template <typename F>
  void for_each_out(Vertex u, F&& f) const {
    for (EdgeId e = out_[check_vertex(u)].first; e != kNoEdge; e = edges_[e].next) f(e, edges_[e].head);
  }
  template <typename F>
  void for_each_edge(F&& f) const {
    for (const auto& [key, e] : index_) f(e, edges_[e].tail, edges_[e].head);
  }

  const NeighborHeap& heap(Vertex w) const { return heaps_[check_vertex(w)]; }
  std::uint32_t degree_count(std::uint32_t d) const { return d < histogram_.size() ? histogram_[d] : 0; }

  Subscription register_flip_observer(EdgeObserver cb);
  void unregister_flip_observer(Subscription s);

  void inject_fault(Fault f) noexcept { fault_ = f; }
  Fault fault() const noexcept { return fault_; }

 protected:
  OrientedGraph(std::size_t n, Variant variant, std::uint32_t gamma);

  Vertex check_vertex(Vertex u) const {
    if (u >= out_.size()) throw Error(ErrorCode::unknown_vertex, "vertex " + std::to_string(u));
    return u;
  }

  void assign_arcs(std::span<const Arc> arcs);

  std::uint32_t gamma_ = 0;

 private:
  friend ValidationReport validate_structure(const OrientedGraph& g);

  struct EdgeRecord {
    Vertex tail = kNoVertex;
    Vertex head = kNoVertex;
    HeapHandle handle;  // tail inside heaps_[head]
    EdgeId prev = kNoEdge;
    EdgeId next = kNoEdge;
    bool live = false;
  };

  struct OutList {
    EdgeId first = kNoEdge;
    EdgeId last = kNoEdge;
    std::uint32_t size = 0;
  };

  struct Observers {
    Observers() = default;
    Observers(const Observers&) {}
    Observers& operator=(const Observers&) { return *this; }
    Observers(Observers&&) noexcept = default;
    Observers& operator=(Observers&&) noexcept = default;

    std::vector<std::pair<Subscription, EdgeObserver>> list;
    Subscription next_id = 1;
  };

  EdgeId new_edge();
  void free_edge(EdgeId e);
  void bump_degree(Vertex u, int delta);

  void list_insert_after(Vertex u, EdgeId e, EdgeId after);  // after == kNoEdge: front
  void list_push_back(Vertex u, EdgeId e);
  void list_unlink(Vertex u, EdgeId e);
  void move_suffix_to_front(Vertex u, EdgeId from);

  bool gap_ok(std::uint32_t high, std::uint32_t low) const;
  bool chain_step_ok(std::uint32_t higher, std::uint32_t lower) const;
  EdgeId find_violated(Vertex tail, EdgeId& suffix_begin, std::uint64_t& scanned) const;
  void run_insert(EdgeId e, Vertex tail, Vertex head, UpdateStats& stats);
  void run_delete(EdgeId e, UpdateStats& stats);
  void finish(UpdateStats& stats, std::chrono::steady_clock::time_point start);

  Variant variant_;
  Fault fault_ = Fault::none;

  std::vector<EdgeRecord> edges_;
  std::vector<EdgeId> free_edges_;
  std::vector<OutList> out_;
  std::vector<std::uint32_t> degree_;
  std::vector<NeighborHeap> heaps_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
  std::vector<std::uint32_t> histogram_;
  std::uint32_t max_degree_ = 0;
  std::uint32_t peak_ = 0;

  std::vector<EdgeEvent> pending_;
  Observers observers_;
};

/// Cross-checks heaps, lists, edge index and degree histogram against each
/// other. Empty report means the representation is coherent.
ValidationReport validate_structure(const OrientedGraph& g);

/// Every edge u->v satisfies dg(u) <= dg(v) + 1, plus validate_structure.
ValidationReport validate_invariant2(const OrientedGraph& g);

}  // namespace arbor
