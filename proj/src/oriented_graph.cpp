#include "arbor/oriented_graph.hpp"

#include <algorithm>
#include <array>

namespace arbor {

namespace {

constexpr std::array kFaults{
    Fault::insert_skip_scan,       Fault::insert_skip_key_update, Fault::insert_reverse_orientation,
    Fault::delete_skip_flip,       Fault::delete_skip_key_update, Fault::spectrum_skip_move_front,
    Fault::spectrum_scan_front,    Fault::spectrum_delete_append,
};

}  // namespace

std::string_view to_string(Fault f) {
  switch (f) {
    case Fault::none: return "none";
    case Fault::insert_skip_scan: return "insert-skip-scan";
    case Fault::insert_skip_key_update: return "insert-skip-key-update";
    case Fault::insert_reverse_orientation: return "insert-reverse-orientation";
    case Fault::delete_skip_flip: return "delete-skip-flip";
    case Fault::delete_skip_key_update: return "delete-skip-key-update";
    case Fault::spectrum_skip_move_front: return "spectrum-skip-move-front";
    case Fault::spectrum_scan_front: return "spectrum-scan-front";
    case Fault::spectrum_delete_append: return "spectrum-delete-append";
  }
  return "none";
}

Fault fault_from_string(std::string_view name) {
  if (name.empty() || name == "none") return Fault::none;
  for (Fault f : kFaults) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::invalid_params, "unknown fault '" + std::string(name) + "'");
}

std::span<const Fault> all_faults() { return kFaults; }

OrientedGraph::OrientedGraph(std::size_t n) : OrientedGraph(n, Variant::naive, 0) {}

OrientedGraph::OrientedGraph(std::size_t n, Variant variant, std::uint32_t gamma)
    : gamma_(gamma), variant_(variant) {
  if (n == 0) throw Error(ErrorCode::invalid_size, "graph needs at least one vertex");
  if (n >= kNoVertex) throw Error(ErrorCode::invalid_size, "too many vertices");
  out_.resize(n);
  degree_.assign(n, 0);
  heaps_.reserve(n);
  for (std::size_t w = 0; w < n; ++w) heaps_.emplace_back(static_cast<Vertex>(w), 0);
  histogram_.assign(n + 1, 0);
  histogram_[0] = static_cast<std::uint32_t>(n);
}

OrientedGraph OrientedGraph::from_arcs(std::size_t n, std::span<const Arc> arcs) {
  OrientedGraph g(n);
  g.assign_arcs(arcs);
  return g;
}

void OrientedGraph::assign_arcs(std::span<const Arc> arcs) {
  for (const Arc& a : arcs) {
    check_vertex(a.tail);
    check_vertex(a.head);
    if (a.tail == a.head) throw Error(ErrorCode::self_loop, "arc " + std::to_string(a.tail));
    const auto key = pair_key(a.tail, a.head);
    if (index_.contains(key)) throw Error(ErrorCode::duplicate_edge, "arc listed twice");
    const EdgeId e = new_edge();
    edges_[e].tail = a.tail;
    edges_[e].head = a.head;
    index_.emplace(key, e);
    list_push_back(a.tail, e);
    bump_degree(a.tail, +1);
  }
  for (std::size_t w = 0; w < heaps_.size(); ++w) heaps_[w] = NeighborHeap(static_cast<Vertex>(w), degree_[w]);
  for (auto& [key, e] : index_) {
    auto& rec = edges_[e];
    auto& h = heaps_[rec.head];
    const Key target = degree_[rec.tail];
    rec.handle = h.insert(rec.tail, std::min<Key>(target, h.center_key() + 1), e);
    while (h.key(rec.handle) < target) h.increment(rec.handle);
  }
  peak_ = max_degree_;
}

EdgeId OrientedGraph::new_edge() {
  EdgeId e;
  if (!free_edges_.empty()) {
    e = free_edges_.back();
    free_edges_.pop_back();
    edges_[e] = EdgeRecord{};
  } else {
    e = static_cast<EdgeId>(edges_.size());
    edges_.emplace_back();
  }
  edges_[e].live = true;
  return e;
}

void OrientedGraph::free_edge(EdgeId e) {
  edges_[e].live = false;
  free_edges_.push_back(e);
}

void OrientedGraph::bump_degree(Vertex u, int delta) {
  const std::uint32_t d = degree_[u];
  const std::uint32_t nd = static_cast<std::uint32_t>(static_cast<int>(d) + delta);
  --histogram_[d];
  ++histogram_[nd];
  degree_[u] = nd;
  if (nd > max_degree_) {
    max_degree_ = nd;
    peak_ = std::max(peak_, nd);
  } else if (d == max_degree_ && histogram_[d] == 0) {
    max_degree_ = nd;
  }
}

void OrientedGraph::list_insert_after(Vertex u, EdgeId e, EdgeId after) {
  auto& list = out_[u];
  auto& rec = edges_[e];
  rec.prev = after;
  rec.next = after == kNoEdge ? list.first : edges_[after].next;
  if (rec.prev != kNoEdge) {
    edges_[rec.prev].next = e;
  } else {
    list.first = e;
  }
  if (rec.next != kNoEdge) {
    edges_[rec.next].prev = e;
  } else {
    list.last = e;
  }
  ++list.size;
}

void OrientedGraph::list_push_back(Vertex u, EdgeId e) { list_insert_after(u, e, out_[u].last); }

void OrientedGraph::list_unlink(Vertex u, EdgeId e) {
  auto& list = out_[u];
  auto& rec = edges_[e];
  if (rec.prev != kNoEdge) {
    edges_[rec.prev].next = rec.next;
  } else {
    list.first = rec.next;
  }
  if (rec.next != kNoEdge) {
    edges_[rec.next].prev = rec.prev;
  } else {
    list.last = rec.prev;
  }
  rec.prev = rec.next = kNoEdge;
  --list.size;
}

// [first .. before(from)] [from .. last]  ->  [from .. last] [first .. before(from)]
void OrientedGraph::move_suffix_to_front(Vertex u, EdgeId from) {
  auto& list = out_[u];
  if (from == list.first) return;
  const EdgeId cut = edges_[from].prev;
  edges_[cut].next = kNoEdge;
  edges_[from].prev = kNoEdge;
  edges_[list.last].next = list.first;
  edges_[list.first].prev = list.last;
  list.first = from;
  list.last = cut;
}

// A flipped edge u->w has dg(u) - dg(w) == 2 when every edge was valid
// beforehand; block lists only promise a gap of at least 2.
bool OrientedGraph::gap_ok(std::uint32_t high, std::uint32_t low) const {
  return variant_ == Variant::naive ? high == low + 2 : high >= low + 2;
}

// Consecutive chain vertices differ by one in out-degree (naive) or strictly
// move away from the starting vertex's degree (block lists).
bool OrientedGraph::chain_step_ok(std::uint32_t higher, std::uint32_t lower) const {
  return variant_ == Variant::naive ? higher == lower + 1 : higher > lower;
}

EdgeId OrientedGraph::find_violated(Vertex tail, EdgeId& suffix_begin, std::uint64_t& scanned) const {
  const std::uint32_t dt = degree_[tail];
  auto violated = [&](EdgeId e) { return dt > degree_[edges_[e].head] + 1; };
  suffix_begin = kNoEdge;
  scanned = 0;
  if (variant_ == Variant::naive) {
    for (EdgeId e = out_[tail].first; e != kNoEdge; e = edges_[e].next) {
      ++scanned;
      if (violated(e)) return e;
    }
    return kNoEdge;
  }
  const std::uint64_t limit = std::min<std::uint64_t>(out_[tail].size, gamma_ - 1);
  if (fault_ == Fault::spectrum_scan_front) {
    EdgeId e = out_[tail].first;
    for (; scanned < limit; e = edges_[e].next) {
      ++scanned;
      if (violated(e)) return e;
    }
    return kNoEdge;
  }
  EdgeId e = out_[tail].last;
  for (; scanned < limit; e = edges_[e].prev) {
    ++scanned;
    suffix_begin = e;
    if (violated(e)) return e;
  }
  return kNoEdge;
}

UpdateStats OrientedGraph::insert_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw Error(ErrorCode::self_loop, "vertex " + std::to_string(u));
  const auto key = pair_key(u, v);
  if (index_.contains(key)) {
    throw Error(ErrorCode::duplicate_edge, "edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  }
  const auto start = std::chrono::steady_clock::now();
  UpdateStats stats;
  peak_ = max_degree_;

  // Orient from the smaller out-degree; ties go from the lower id.
  bool forward = degree_[u] < degree_[v] || (degree_[u] == degree_[v] && u < v);
  if (fault_ == Fault::insert_reverse_orientation) forward = !forward;
  const Arc a = forward ? Arc{u, v} : Arc{v, u};

  const EdgeId e = new_edge();
  index_.emplace(key, e);
  pending_.push_back({EdgeEventKind::added, e, a});
  run_insert(e, a.tail, a.head, stats);
  finish(stats, start);
  return stats;
}

// Iterative form of the recursive insertion: `e` is the edge being added as
// tail->head. When a violated out-edge of tail is found it is taken out and
// re-added reversed in the next round.
void OrientedGraph::run_insert(EdgeId e, Vertex tail, Vertex head, UpdateStats& stats) {
  std::uint32_t prev_start = 0;
  for (;;) {
    ++stats.recursion_depth;
    const std::uint32_t start = degree_[tail];
    if (stats.recursion_depth > 1 && !chain_step_ok(prev_start, start)) ++stats.chain_anomalies;
    prev_start = start;

    auto& rec = edges_[e];
    rec.tail = tail;
    rec.head = head;
    bump_degree(tail, +1);
    // tail's key stays at its old out-degree until no flip is needed
    rec.handle = heaps_[head].insert(tail, degree_[tail] - 1, e);
    ++stats.work.heap_updates;

    EdgeId suffix = kNoEdge;
    std::uint64_t scanned = 0;
    const EdgeId victim = fault_ == Fault::insert_skip_scan ? kNoEdge : find_violated(tail, suffix, scanned);
    stats.work.list_scanned += scanned;
    stats.work.max_scan_per_step = std::max(stats.work.max_scan_per_step, scanned);

    if (victim != kNoEdge) {
      const Vertex other = edges_[victim].head;
      if (!gap_ok(degree_[tail], degree_[other])) ++stats.chain_anomalies;
      heaps_[other].erase(edges_[victim].handle);
      ++stats.work.heap_updates;
      const EdgeId before = edges_[victim].prev;
      list_unlink(tail, victim);
      list_insert_after(tail, e, before);
      stats.work.list_splices += 2;
      stats.work.max_splices_per_step = std::max<std::uint64_t>(stats.work.max_splices_per_step, 2);
      bump_degree(tail, -1);
      ++stats.flips;
      pending_.push_back({EdgeEventKind::flipped, victim, Arc{other, tail}});
      e = victim;
      head = tail;
      tail = other;
      continue;
    }

    if (fault_ != Fault::insert_skip_key_update) {
      for (EdgeId f = out_[tail].first; f != kNoEdge; f = edges_[f].next) {
        heaps_[edges_[f].head].increment(edges_[f].handle);
        ++stats.work.heap_updates;
      }
      heaps_[head].increment(rec.handle);
      ++stats.work.heap_updates;
    }
    heaps_[tail].increment_center();
    ++stats.work.center_updates;

    std::uint64_t splices = 1;
    if (variant_ == Variant::naive) {
      list_push_back(tail, e);
    } else if (fault_ == Fault::spectrum_skip_move_front) {
      list_push_back(tail, e);
    } else {
      if (suffix != kNoEdge) {
        move_suffix_to_front(tail, suffix);
        ++splices;
      }
      list_insert_after(tail, e, kNoEdge);
    }
    stats.work.list_splices += splices;
    stats.work.max_splices_per_step = std::max(stats.work.max_splices_per_step, splices);
    return;
  }
}

UpdateStats OrientedGraph::delete_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  auto it = index_.find(pair_key(u, v));
  if (it == index_.end()) {
    throw Error(ErrorCode::no_such_edge, "edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  }
  const auto start = std::chrono::steady_clock::now();
  UpdateStats stats;
  peak_ = max_degree_;
  const EdgeId e = it->second;
  index_.erase(it);
  const Arc removed = arc(e);
  run_delete(e, stats);
  pending_.push_back({EdgeEventKind::removed, e, removed});
  finish(stats, start);
  return stats;
}

// Iterative form of the recursive deletion. After an out-edge of `tail` is
// removed, a violated in-edge other->tail is re-attached as tail->other in
// the removed edge's list position; `other` then loses an out-edge and the
// process repeats from there.
void OrientedGraph::run_delete(EdgeId e, UpdateStats& stats) {
  Vertex tail = edges_[e].tail;
  heaps_[edges_[e].head].erase(edges_[e].handle);
  ++stats.work.heap_updates;
  EdgeId slot = edges_[e].prev;
  list_unlink(tail, e);
  ++stats.work.list_splices;
  std::uint64_t step_splices = 1;
  std::uint32_t prev_start = degree_[tail];
  bump_degree(tail, -1);
  free_edge(e);

  for (;;) {
    ++stats.recursion_depth;
    auto& h = heaps_[tail];
    const auto top = h.report_max_above_center();
    ++stats.work.heap_queries;
    const bool flip = fault_ != Fault::delete_skip_flip && top && h.key(*top) > degree_[tail] + 1;
    if (!flip) {
      stats.work.max_splices_per_step = std::max(stats.work.max_splices_per_step, step_splices);
      if (fault_ != Fault::delete_skip_key_update) {
        for (EdgeId f = out_[tail].first; f != kNoEdge; f = edges_[f].next) {
          heaps_[edges_[f].head].decrement(edges_[f].handle);
          ++stats.work.heap_updates;
        }
      }
      h.decrement_center();
      ++stats.work.center_updates;
      return;
    }

    if (!gap_ok(h.key(*top), degree_[tail])) ++stats.chain_anomalies;
    const EdgeId f = h.payload(*top);
    const Vertex other = h.id(*top);
    if (!chain_step_ok(degree_[other], prev_start)) ++stats.chain_anomalies;
    prev_start = degree_[other];

    // drop the original other->tail ...
    h.erase(*top);
    const EdgeId other_slot = edges_[f].prev;
    list_unlink(other, f);
    bump_degree(other, -1);
    // ... and keep its reversed copy tail->other where the removed edge was
    auto& rec = edges_[f];
    rec.tail = tail;
    rec.head = other;
    if (fault_ == Fault::spectrum_delete_append) {
      list_push_back(tail, f);
    } else {
      list_insert_after(tail, f, slot);
    }
    bump_degree(tail, +1);
    rec.handle = heaps_[other].insert(tail, degree_[tail], f);
    stats.work.heap_updates += 2;
    stats.work.list_splices += 2;
    step_splices += 1;
    stats.work.max_splices_per_step = std::max(stats.work.max_splices_per_step, step_splices);
    step_splices = 1;  // the unlink from other's list belongs to the next step
    ++stats.flips;
    pending_.push_back({EdgeEventKind::flipped, f, Arc{tail, other}});
    tail = other;
    slot = other_slot;
  }
}

void OrientedGraph::finish(UpdateStats& stats, std::chrono::steady_clock::time_point start) {
  stats.max_out_degree_after = max_degree_;
  stats.peak_out_degree = peak_;
  stats.elapsed = std::chrono::steady_clock::now() - start;
  if (pending_.empty()) return;
  std::vector<EdgeEvent> events;
  events.swap(pending_);
  for (const auto& ev : events) {
    for (const auto& [id, cb] : observers_.list) cb(ev);
  }
}

std::uint32_t OrientedGraph::out_degree(Vertex u) const { return degree_[check_vertex(u)]; }

Arc OrientedGraph::orientation_of(Vertex u, Vertex v) const { return arc(edge_id(u, v)); }

bool OrientedGraph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  return index_.contains(pair_key(u, v));
}

EdgeId OrientedGraph::edge_id(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  auto it = index_.find(pair_key(u, v));
  if (it == index_.end()) {
    throw Error(ErrorCode::no_such_edge, "edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  }
  return it->second;
}

std::vector<EdgeId> OrientedGraph::out_edges(Vertex u) const {
  std::vector<EdgeId> result;
  result.reserve(degree_[check_vertex(u)]);
  for_each_out(u, [&](EdgeId e, Vertex) { result.push_back(e); });
  return result;
}

Subscription OrientedGraph::register_flip_observer(EdgeObserver cb) {
  const Subscription id = observers_.next_id++;
  observers_.list.emplace_back(id, std::move(cb));
  return id;
}

void OrientedGraph::unregister_flip_observer(Subscription s) {
  std::erase_if(observers_.list, [s](const auto& entry) { return entry.first == s; });
}

ValidationReport validate_structure(const OrientedGraph& g) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };
  const std::size_t n = g.vertex_count();

  std::vector<std::uint32_t> in_degree(n, 0);
  std::vector<std::uint32_t> histogram(n + 1, 0);
  std::size_t listed = 0;
  std::uint32_t max_degree = 0;
  for (Vertex u = 0; u < n; ++u) {
    std::uint32_t count = 0;
    EdgeId prev = kNoEdge;
    for (EdgeId e = g.out_[u].first; e != kNoEdge; e = g.edges_[e].next) {
      const auto& rec = g.edges_[e];
      if (!rec.live) fail("dead edge " + std::to_string(e) + " in out-list of " + std::to_string(u));
      if (rec.tail != u) fail("edge " + std::to_string(e) + " listed under wrong tail " + std::to_string(u));
      if (rec.prev != prev) fail("broken back link in out-list of " + std::to_string(u));
      prev = e;
      if (rec.head < n) ++in_degree[rec.head];
      if (++count > g.edges_.size()) {
        fail("cycle in out-list of " + std::to_string(u));
        break;
      }
    }
    if (prev != g.out_[u].last) fail("out-list tail pointer of " + std::to_string(u) + " is stale");
    if (count != g.out_[u].size) fail("out-list size of " + std::to_string(u) + " is stale");
    if (count != g.degree_[u]) {
      fail("out-degree counter of " + std::to_string(u) + " is " + std::to_string(g.degree_[u]) +
           ", list has " + std::to_string(count));
    }
    listed += count;
    if (count <= n) ++histogram[count];
    max_degree = std::max(max_degree, count);
  }
  if (listed != g.index_.size()) fail("edge index size differs from listed edges");
  if (histogram != g.histogram_) fail("degree histogram is stale");
  if (max_degree != g.max_degree_) {
    fail("max out-degree is " + std::to_string(g.max_degree_) + ", actual " + std::to_string(max_degree));
  }

  for (const auto& [key, e] : g.index_) {
    if (e >= g.edges_.size() || !g.edges_[e].live) {
      fail("edge index points at a dead record");
      continue;
    }
    const auto& rec = g.edges_[e];
    if (pair_key(rec.tail, rec.head) != key) fail("edge index key disagrees with record endpoints");
    const auto& h = g.heaps_[rec.head];
    if (!h.contains(rec.handle)) {
      fail("tail " + std::to_string(rec.tail) + " missing from heap of " + std::to_string(rec.head));
      continue;
    }
    if (h.id(rec.handle) != rec.tail || h.payload(rec.handle) != e) fail("heap handle of edge points elsewhere");
    if (h.key(rec.handle) != g.degree_[rec.tail]) {
      fail("key of " + std::to_string(rec.tail) + " in heap of " + std::to_string(rec.head) + " is " +
           std::to_string(h.key(rec.handle)) + ", out-degree is " + std::to_string(g.degree_[rec.tail]));
    }
  }

  for (Vertex w = 0; w < n; ++w) {
    const auto& h = g.heaps_[w];
    if (h.center() != w) fail("heap " + std::to_string(w) + " has wrong center");
    if (h.center_key() != g.degree_[w]) {
      fail("center key of " + std::to_string(w) + " is " + std::to_string(h.center_key()) + ", out-degree is " +
           std::to_string(g.degree_[w]));
    }
    if (h.size() != in_degree[w]) fail("heap of " + std::to_string(w) + " size differs from in-degree");
    for (auto& issue : h.check_structure()) fail(std::move(issue));
  }
  return report;
}

ValidationReport validate_invariant2(const OrientedGraph& g) {
  ValidationReport report;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    const std::uint32_t du = g.out_degree(u);
    g.for_each_out(u, [&](EdgeId, Vertex v) {
      const std::uint32_t dv = g.out_degree(v);
      if (du > dv + 1) {
        report.failures.push_back("violated edge " + std::to_string(u) + "->" + std::to_string(v) + " (dg " +
                                  std::to_string(du) + " > " + std::to_string(dv) + "+1)");
      }
    });
  }
  report.merge(validate_structure(g));
  return report;
}

}  // namespace arbor
