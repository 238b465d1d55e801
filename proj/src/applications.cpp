#include "arbor/applications.hpp"

#include <algorithm>
#include <unordered_set>

namespace arbor {

MaximalMatching::MaximalMatching(OrientedGraph& g)
    : graph_(g), mate_(g.vertex_count(), kNoVertex), first_(g.vertex_count(), kNoEdge) {
  // greedy start, then free_in from scratch
  g.for_each_edge([&](EdgeId e, Vertex t, Vertex h) {
    reserve(e);
    if (mate_[t] == kNoVertex && mate_[h] == kNoVertex) {
      mate_[t] = h;
      mate_[h] = t;
      ++pairs_;
    }
  });
  g.for_each_edge([&](EdgeId e, Vertex, Vertex) { sync(e); });
  work_ = {};
  subscription_ = g.register_flip_observer([this](const EdgeEvent& ev) { on_event(ev); });
}

MaximalMatching::~MaximalMatching() { graph_.unregister_flip_observer(subscription_); }

Vertex MaximalMatching::check_vertex(Vertex u) const {
  if (u >= mate_.size()) throw Error(ErrorCode::unknown_vertex, "vertex " + std::to_string(u));
  return u;
}

std::optional<Vertex> MaximalMatching::mate(Vertex u) const {
  const Vertex m = mate_[check_vertex(u)];
  if (m == kNoVertex) return std::nullopt;
  return m;
}

bool MaximalMatching::is_free(Vertex u) const { return mate_[check_vertex(u)] == kNoVertex; }

std::vector<Vertex> MaximalMatching::free_in(Vertex w) const {
  std::vector<Vertex> result;
  for (EdgeId e = first_[check_vertex(w)]; e != kNoEdge; e = next_[e]) result.push_back(graph_.arc(e).tail);
  return result;
}

void MaximalMatching::reserve(EdgeId e) {
  if (e < owner_.size()) return;
  const std::size_t size = std::max<std::size_t>(e + 1, owner_.size() * 2);
  owner_.resize(size, kNoVertex);
  prev_.resize(size, kNoEdge);
  next_.resize(size, kNoEdge);
}

void MaximalMatching::unlink(EdgeId e) {
  const Vertex w = owner_[e];
  if (w == kNoVertex) return;
  if (prev_[e] != kNoEdge) {
    next_[prev_[e]] = next_[e];
  } else {
    first_[w] = next_[e];
  }
  if (next_[e] != kNoEdge) prev_[next_[e]] = prev_[e];
  owner_[e] = kNoVertex;
  prev_[e] = next_[e] = kNoEdge;
}

// Puts e into free_in(head) iff its tail is free, reading the current arc.
void MaximalMatching::sync(EdgeId e) {
  reserve(e);
  ++work_.notifications;
  const Arc a = graph_.arc(e);
  const Vertex want = mate_[a.tail] == kNoVertex ? a.head : kNoVertex;
  if (owner_[e] == want) return;
  unlink(e);
  if (want == kNoVertex) return;
  owner_[e] = want;
  next_[e] = first_[want];
  if (first_[want] != kNoEdge) prev_[first_[want]] = e;
  first_[want] = e;
}

void MaximalMatching::sync_out_edges(Vertex u) {
  graph_.for_each_out(u, [&](EdgeId e, Vertex) { sync(e); });
}

void MaximalMatching::match(Vertex u, Vertex v) {
  mate_[u] = v;
  mate_[v] = u;
  ++pairs_;
  ++work_.matches;
  sync_out_edges(u);
  sync_out_edges(v);
}

void MaximalMatching::rematch(Vertex u) {
  Vertex partner = kNoVertex;
  graph_.for_each_out(u, [&](EdgeId, Vertex x) {
    ++work_.scanned;
    if (partner == kNoVertex && mate_[x] == kNoVertex) partner = x;
  });
  if (partner == kNoVertex && first_[u] != kNoEdge) partner = graph_.arc(first_[u]).tail;
  if (partner != kNoVertex) {
    match(u, partner);
  } else {
    sync_out_edges(u);
  }
}

void MaximalMatching::on_event(const EdgeEvent& ev) {
  const Vertex t = ev.arc.tail;
  const Vertex h = ev.arc.head;
  switch (ev.kind) {
    case EdgeEventKind::added:
      sync(ev.edge);
      if (mate_[t] == kNoVertex && mate_[h] == kNoVertex) match(t, h);
      break;
    case EdgeEventKind::flipped: sync(ev.edge); break;
    case EdgeEventKind::removed:
      reserve(ev.edge);
      unlink(ev.edge);
      if (mate_[t] == h) {
        mate_[t] = mate_[h] = kNoVertex;
        --pairs_;
        rematch(t);
        if (mate_[h] == kNoVertex) rematch(h);
      }
      break;
  }
}

ValidationReport MaximalMatching::check() const {
  ValidationReport report;
  const std::size_t n = mate_.size();
  std::size_t matched = 0;
  for (Vertex u = 0; u < n; ++u) {
    const Vertex m = mate_[u];
    if (m == kNoVertex) continue;
    ++matched;
    if (m >= n || mate_[m] != u) {
      report.failures.push_back("mate of " + std::to_string(u) + " is not an involution");
    } else if (!graph_.has_edge(u, m)) {
      report.failures.push_back("matched pair {" + std::to_string(u) + "," + std::to_string(m) + "} is not an edge");
    }
  }
  if (matched != 2 * pairs_) report.failures.push_back("matching size counter is stale");

  std::vector<std::unordered_multiset<Vertex>> expected(n);
  graph_.for_each_edge([&](EdgeId, Vertex t, Vertex h) {
    if (mate_[t] == kNoVertex && mate_[h] == kNoVertex) {
      report.failures.push_back("edge {" + std::to_string(t) + "," + std::to_string(h) + "} has two free endpoints");
    }
    if (mate_[t] == kNoVertex) expected[h].insert(t);
  });
  for (Vertex w = 0; w < n; ++w) {
    const auto listed = free_in(w);
    if (std::unordered_multiset<Vertex>(listed.begin(), listed.end()) != expected[w]) {
      report.failures.push_back("free_in of " + std::to_string(w) + " is stale");
    }
  }
  return report;
}

AdjacencyIndex::AdjacencyIndex(OrientedGraph& g) : graph_(g), out_(g.vertex_count()) {
  g.for_each_edge([&](EdgeId, Vertex t, Vertex h) { out_[t].insert(h); });
  subscription_ = g.register_flip_observer([this](const EdgeEvent& ev) {
    const Vertex t = ev.arc.tail;
    const Vertex h = ev.arc.head;
    switch (ev.kind) {
      case EdgeEventKind::added: out_[t].insert(h); break;
      case EdgeEventKind::removed: out_[t].erase(h); break;
      case EdgeEventKind::flipped:
        out_[h].erase(t);
        out_[t].insert(h);
        break;
    }
  });
}

AdjacencyIndex::~AdjacencyIndex() { graph_.unregister_flip_observer(subscription_); }

bool AdjacencyIndex::adjacent(Vertex u, Vertex v) const {
  const auto& su = out_set(u);
  const auto& sv = out_set(v);
  if (u == v) return false;
  return su.contains(v) || sv.contains(u);
}

const std::set<Vertex>& AdjacencyIndex::out_set(Vertex u) const {
  if (u >= out_.size()) throw Error(ErrorCode::unknown_vertex, "vertex " + std::to_string(u));
  return out_[u];
}

ValidationReport AdjacencyIndex::check() const {
  ValidationReport report;
  for (Vertex u = 0; u < out_.size(); ++u) {
    std::set<Vertex> actual;
    graph_.for_each_out(u, [&](EdgeId, Vertex h) { actual.insert(h); });
    if (actual != out_[u]) report.failures.push_back("out-set of " + std::to_string(u) + " differs from the graph");
  }
  return report;
}

}  // namespace arbor
