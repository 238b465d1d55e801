#include "arbor/workload.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace arbor {

namespace {

constexpr std::array<std::string_view, 3> kKinds{"forest-union", "sliding-window", "star-churn"};

// k rooted forests over one vertex set plus the union edge set. Linking
// reroots one tree so that the parent pointers stay a forest.
class Forests {
 public:
  Forests(std::size_t n, std::uint32_t k) : n_(n), parent_(k, std::vector<Vertex>(n, kNoVertex)) {}

  std::size_t edge_count() const { return edges_.size(); }
  std::size_t capacity() const { return parent_.size() * (n_ - 1); }

  bool connected(std::uint32_t f, Vertex a, Vertex b) const { return root(f, a) == root(f, b); }

  bool link(std::uint32_t f, Vertex a, Vertex b) {
    if (a == b || owner_.contains(pair_key(a, b)) || connected(f, a, b)) return false;
    reroot(f, a);
    parent_[f][a] = b;
    owner_.emplace(pair_key(a, b), Slot{f, edges_.size()});
    edges_.push_back({a, b});
    return true;
  }

  Arc edge(std::size_t i) const { return edges_[i]; }

  void cut(Vertex a, Vertex b) {
    auto it = owner_.find(pair_key(a, b));
    const Slot slot = it->second;
    owner_.erase(it);
    auto& parent = parent_[slot.forest];
    if (parent[a] == b) {
      parent[a] = kNoVertex;
    } else {
      parent[b] = kNoVertex;
    }
    const Arc moved = edges_.back();
    edges_[slot.index] = moved;
    edges_.pop_back();
    if (slot.index < edges_.size()) owner_[pair_key(moved.tail, moved.head)].index = slot.index;
  }

 private:
  struct Slot {
    std::uint32_t forest;
    std::size_t index;
  };

  Vertex root(std::uint32_t f, Vertex v) const {
    while (parent_[f][v] != kNoVertex) v = parent_[f][v];
    return v;
  }

  void reroot(std::uint32_t f, Vertex v) {
    auto& parent = parent_[f];
    Vertex prev = kNoVertex;
    while (v != kNoVertex) {
      const Vertex next = parent[v];
      parent[v] = prev;
      prev = v;
      v = next;
    }
  }

  std::size_t n_;
  std::vector<std::vector<Vertex>> parent_;
  std::vector<Arc> edges_;
  std::unordered_map<std::uint64_t, Slot> owner_;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

TraceOp insert_op(Vertex a, Vertex b) { return {TraceOpKind::insert, a, b}; }
TraceOp erase_op(Vertex a, Vertex b) { return {TraceOpKind::erase, a, b}; }

bool try_link(Forests& forests, Rng& rng, std::size_t n, std::uint32_t forest, Trace& trace) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    const auto a = static_cast<Vertex>(rng.below(n));
    const auto b = static_cast<Vertex>(rng.below(n));
    if (forests.link(forest, a, b)) {
      trace.ops.push_back(insert_op(a, b));
      return true;
    }
  }
  return false;
}

Trace forest_union(const WorkloadParams& p) {
  Trace trace{p.n, {}};
  Rng rng(p.seed);
  Forests forests(p.n, p.alpha);
  // hover near 90% of the k(n-1) capacity so the forests stay dense
  const auto target = static_cast<std::size_t>(0.9 * static_cast<double>(forests.capacity()));
  while (trace.ops.size() < p.ops) {
    const bool grow = forests.edge_count() == 0 || rng.chance(forests.edge_count() < target ? 0.7 : 0.3);
    if (grow && try_link(forests, rng, p.n, static_cast<std::uint32_t>(rng.below(p.alpha)), trace)) continue;
    if (forests.edge_count() == 0) continue;
    const Arc e = forests.edge(rng.below(forests.edge_count()));
    forests.cut(e.tail, e.head);
    trace.ops.push_back(erase_op(e.tail, e.head));
  }
  return trace;
}

Trace sliding_window(const WorkloadParams& p) {
  Trace trace{p.n, {}};
  Rng rng(p.seed);
  Forests forests(p.n, p.alpha);
  const std::size_t window = std::max<std::size_t>(1, forests.capacity() * 3 / 4);
  std::deque<Arc> order;
  std::uint32_t forest = 0;
  while (trace.ops.size() < p.ops) {
    if (order.size() < window && try_link(forests, rng, p.n, forest, trace)) {
      const auto& op = trace.ops.back();
      order.push_back({op.u, op.v});
      forest = (forest + 1) % p.alpha;
      continue;
    }
    if (order.empty()) continue;
    const Arc oldest = order.front();
    order.pop_front();
    forests.cut(oldest.tail, oldest.head);
    trace.ops.push_back(erase_op(oldest.tail, oldest.head));
  }
  return trace;
}

Trace star_churn(const WorkloadParams& p) {
  Trace trace{p.n, {}};
  Rng rng(p.seed);
  const std::uint32_t hubs = std::min<std::uint32_t>(p.alpha, static_cast<std::uint32_t>(p.n - 1));
  std::vector<Vertex> leaves;
  for (auto v = static_cast<Vertex>(hubs); v < p.n; ++v) leaves.push_back(v);
  for (std::size_t round = 0; trace.ops.size() < p.ops; ++round) {
    if (round > 0) std::shuffle(leaves.begin(), leaves.end(), rng.engine());
    for (Vertex h = 0; h < hubs; ++h) {
      for (Vertex leaf : leaves) trace.ops.push_back(insert_op(h, leaf));
    }
    for (Vertex h = 0; h < hubs; ++h) {
      for (Vertex leaf : leaves) trace.ops.push_back(erase_op(h, leaf));
    }
  }
  trace.ops.resize(p.ops);
  return trace;
}

}  // namespace

std::span<const std::string_view> workload_kinds() { return kKinds; }

Trace generate_workload(const WorkloadParams& p) {
  if (p.n < 2 || p.n >= kNoVertex) throw Error(ErrorCode::invalid_params, "n must be >= 2");
  if (p.alpha < 1) throw Error(ErrorCode::invalid_params, "alpha must be >= 1");
  if (p.ops < 1) throw Error(ErrorCode::invalid_params, "ops must be >= 1");
  if (p.kind == "forest-union") return forest_union(p);
  if (p.kind == "sliding-window") return sliding_window(p);
  if (p.kind == "star-churn") return star_churn(p);
  throw Error(ErrorCode::invalid_params, "unknown workload kind '" + std::string(p.kind) + "'");
}

}  // namespace arbor
