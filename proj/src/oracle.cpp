#include "arbor/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "arbor/spectrum.hpp"

namespace arbor::oracle {

StaticGraph StaticGraph::from(const OrientedGraph& g) {
  StaticGraph s;
  s.n = g.vertex_count();
  s.edges.reserve(g.edge_count());
  g.for_each_edge([&](EdgeId, Vertex t, Vertex h) { s.edges.emplace_back(std::min(t, h), std::max(t, h)); });
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

std::size_t oracle_limit() {
  constexpr std::size_t kDefault = 16;
  constexpr std::size_t kCeiling = 24;
  const char* env = std::getenv("ARBOR_ORACLE_LIMIT");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0') return kDefault;
  return std::min<std::size_t>(v, kCeiling);
}

namespace {

void check_simple(const StaticGraph& g) {
  for (const auto& [a, b] : g.edges) {
    if (a >= g.n || b >= g.n) throw Error(ErrorCode::unknown_vertex, "edge endpoint out of range");
    if (a == b) throw Error(ErrorCode::self_loop, "vertex " + std::to_string(a));
  }
}

std::uint32_t arboricity_of(std::size_t n, const std::vector<std::uint32_t>& adj) {
  if (n < 2) return 1;
  const std::uint32_t full = 1u << n;
  // edges[U] = edges[U \ {v}] + |N(v) ∩ U| with v the lowest vertex of U
  std::vector<std::uint32_t> inside(full, 0);
  std::uint32_t best = 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int v = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    inside[mask] = inside[rest] + static_cast<std::uint32_t>(std::popcount(adj[v] & rest));
    const auto size = static_cast<std::uint32_t>(std::popcount(mask));
    if (size >= 2) best = std::max(best, (inside[mask] + size - 2) / (size - 1));
  }
  return best;
}

std::vector<std::uint32_t> adjacency_masks(const StaticGraph& g) {
  std::vector<std::uint32_t> adj(g.n, 0);
  for (const auto& [a, b] : g.edges) {
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  return adj;
}

// Dinic on unit-ish capacities; instances are a few thousand nodes at most.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), it_(nodes) {}

  void add(std::uint32_t from, std::uint32_t to, std::int64_t cap) {
    adj_[from].push_back(static_cast<std::uint32_t>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[to].push_back(static_cast<std::uint32_t>(arcs_.size()));
    arcs_.push_back({from, 0});
  }

  std::int64_t run(std::uint32_t s, std::uint32_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (const std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += pushed;
    }
    return flow;
  }

 private:
  struct ArcCap {
    std::uint32_t to;
    std::int64_t cap;
  };

  bool bfs(std::uint32_t s, std::uint32_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::uint32_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto a : adj_[u]) {
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::uint32_t u, std::uint32_t t, std::int64_t limit) {
    if (u == t) return limit;
    for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
      const auto a = adj_[u][i];
      const auto v = arcs_[a].to;
      if (arcs_[a].cap <= 0 || level_[v] != level_[u] + 1) continue;
      if (const auto pushed = dfs(v, t, std::min(limit, arcs_[a].cap))) {
        arcs_[a].cap -= pushed;
        arcs_[a ^ 1].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<ArcCap> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

bool orientable_within(const StaticGraph& g, std::uint32_t d) {
  const std::size_t m = g.edges.size();
  const auto source = static_cast<std::uint32_t>(m + g.n);
  const auto sink = source + 1;
  MaxFlow flow(m + g.n + 2);
  for (std::size_t i = 0; i < m; ++i) {
    const auto node = static_cast<std::uint32_t>(i);
    flow.add(source, node, 1);
    flow.add(node, static_cast<std::uint32_t>(m + g.edges[i].first), 1);
    flow.add(node, static_cast<std::uint32_t>(m + g.edges[i].second), 1);
  }
  for (std::size_t v = 0; v < g.n; ++v) flow.add(static_cast<std::uint32_t>(m + v), sink, d);
  return flow.run(source, sink) == static_cast<std::int64_t>(m);
}

}  // namespace

std::uint32_t arboricity_exact(const StaticGraph& g) {
  if (g.n > oracle_limit()) {
    throw Error(ErrorCode::too_large, "n = " + std::to_string(g.n) + " exceeds oracle limit " +
                                          std::to_string(oracle_limit()));
  }
  check_simple(g);
  return arboricity_of(g.n, adjacency_masks(g));
}

std::uint32_t min_max_outdegree(const StaticGraph& g) {
  check_simple(g);
  if (g.edges.empty()) return 0;
  std::vector<std::uint32_t> deg(g.n, 0);
  for (const auto& [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  std::uint32_t lo = 1;
  std::uint32_t hi = *std::max_element(deg.begin(), deg.end());
  while (lo < hi) {
    const std::uint32_t mid = lo + (hi - lo) / 2;
    if (orientable_within(g, mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::uint32_t ceil_log(double beta, std::size_t n) {
  if (!(beta > 1.0)) throw Error(ErrorCode::invalid_params, "beta must be > 1");
  // repeated multiplication, with slack for products that should land exactly on n
  const double target = static_cast<double>(n) * (1.0 - 1e-12);
  std::uint32_t k = 0;
  double power = 1.0;
  while (power < target) {
    power *= beta;
    ++k;
  }
  return k;
}

double theorem2_bound(std::uint32_t alpha, double beta, std::size_t n) {
  if (!(beta > 1.0)) throw Error(ErrorCode::invalid_params, "beta must be > 1");
  if (n < 2) throw Error(ErrorCode::invalid_params, "n must be >= 2");
  return beta * static_cast<double>(alpha) + static_cast<double>(ceil_log(beta, n));
}

// ---------------------------------------------------------------------------

Key& ReferenceHeap::live(Vertex id) {
  auto it = keys_.find(id);
  if (it == keys_.end()) throw Error(ErrorCode::stale_handle, "id " + std::to_string(id) + " not present");
  return it->second;
}

void ReferenceHeap::insert(Vertex id, Key key) {
  if (key > center_key_ + 1) throw Error(ErrorCode::key_too_high, "key " + std::to_string(key));
  if (keys_.contains(id)) throw Error(ErrorCode::duplicate_id, "id " + std::to_string(id));
  keys_.emplace(id, key);
}

void ReferenceHeap::erase(Vertex id) {
  live(id);
  keys_.erase(id);
}

void ReferenceHeap::increment(Vertex id) { ++live(id); }

void ReferenceHeap::decrement(Vertex id) {
  Key& k = live(id);
  if (k == 0) throw Error(ErrorCode::decrement_below_zero, "id " + std::to_string(id));
  --k;
}

void ReferenceHeap::increment_center() { ++center_key_; }

void ReferenceHeap::decrement_center() {
  if (center_key_ == 0) throw Error(ErrorCode::center_below_zero, "center key is 0");
  --center_key_;
}

std::optional<Key> ReferenceHeap::max_at_least(Key threshold) const {
  std::optional<Key> best;
  for (const auto& [id, k] : keys_) {
    if (k >= threshold && (!best || k > *best)) best = k;
  }
  return best;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t element_hash(Vertex id, Key key) { return mix((static_cast<std::uint64_t>(id) << 32) | key); }

const char* kind_name(HeapOpKind k) {
  switch (k) {
    case HeapOpKind::insert: return "insert";
    case HeapOpKind::erase: return "erase";
    case HeapOpKind::increment: return "increment";
    case HeapOpKind::decrement: return "decrement";
    case HeapOpKind::increment_center: return "increment_center";
    case HeapOpKind::decrement_center: return "decrement_center";
    case HeapOpKind::report_max: return "report_max";
    case HeapOpKind::report_max_above_center: return "report_max_above_center";
  }
  return "?";
}

}  // namespace

std::string describe(const HeapOp& op) {
  std::ostringstream out;
  out << kind_name(op.kind);
  if (op.kind == HeapOpKind::insert) {
    out << '(' << op.id << ", " << op.key << ')';
  } else if (op.kind == HeapOpKind::erase || op.kind == HeapOpKind::increment || op.kind == HeapOpKind::decrement) {
    out << '(' << op.id << ')';
  }
  return out.str();
}

std::string describe(const HeapObservation& obs) {
  std::ostringstream out;
  out << "error=" << (obs.error ? to_string(*obs.error) : "none");
  out << " max=";
  if (obs.max_key) {
    out << *obs.max_key;
  } else {
    out << "none";
  }
  out << " size=" << obs.size << " k0=" << obs.center_key << " digest=" << std::hex << obs.digest;
  return out.str();
}

std::vector<HeapObservation> reference_heap_replay(Key center_key, const std::vector<HeapOp>& ops) {
  ReferenceHeap heap(center_key);
  std::vector<HeapObservation> result;
  result.reserve(ops.size());
  std::uint64_t digest = 0;
  for (const auto& op : ops) {
    HeapObservation obs;
    try {
      switch (op.kind) {
        case HeapOpKind::insert:
          heap.insert(op.id, op.key);
          digest += element_hash(op.id, op.key);
          break;
        case HeapOpKind::erase: {
          const auto it = heap.contents().find(op.id);
          const Key k = it == heap.contents().end() ? 0 : it->second;
          heap.erase(op.id);
          digest -= element_hash(op.id, k);
          break;
        }
        case HeapOpKind::increment:
        case HeapOpKind::decrement: {
          const auto it = heap.contents().find(op.id);
          const Key k = it == heap.contents().end() ? 0 : it->second;
          if (op.kind == HeapOpKind::increment) {
            heap.increment(op.id);
          } else {
            heap.decrement(op.id);
          }
          digest += element_hash(op.id, heap.contents().at(op.id)) - element_hash(op.id, k);
          break;
        }
        case HeapOpKind::increment_center: heap.increment_center(); break;
        case HeapOpKind::decrement_center: heap.decrement_center(); break;
        case HeapOpKind::report_max: obs.max_key = heap.report_max(); break;
        case HeapOpKind::report_max_above_center: obs.max_key = heap.report_max_above_center(); break;
      }
    } catch (const Error& e) {
      obs.error = e.code();
    }
    obs.size = heap.size();
    obs.center_key = heap.center_key();
    obs.digest = digest;
    result.push_back(obs);
  }
  return result;
}

std::vector<HeapObservation> neighbor_heap_replay(Key center_key, const std::vector<HeapOp>& ops) {
  NeighborHeap heap(0, center_key);
  std::unordered_map<Vertex, HeapHandle> handles;
  std::vector<HeapObservation> result;
  result.reserve(ops.size());
  for (const auto& op : ops) {
    HeapObservation obs;
    const auto handle = [&] {
      auto it = handles.find(op.id);
      return it == handles.end() ? HeapHandle{} : it->second;
    };
    try {
      switch (op.kind) {
        case HeapOpKind::insert: handles[op.id] = heap.insert(op.id, op.key); break;
        case HeapOpKind::erase: heap.erase(handle()); break;
        case HeapOpKind::increment: heap.increment(handle()); break;
        case HeapOpKind::decrement: heap.decrement(handle()); break;
        case HeapOpKind::increment_center: heap.increment_center(); break;
        case HeapOpKind::decrement_center: heap.decrement_center(); break;
        case HeapOpKind::report_max:
          if (auto h = heap.report_max()) obs.max_key = heap.key(*h);
          break;
        case HeapOpKind::report_max_above_center:
          if (auto h = heap.report_max_above_center()) obs.max_key = heap.key(*h);
          break;
      }
    } catch (const Error& e) {
      obs.error = e.code();
    }
    obs.size = heap.size();
    obs.center_key = heap.center_key();
    heap.for_each([&](Vertex id, Key key) { obs.digest += element_hash(id, key); });
    result.push_back(obs);
  }
  return result;
}

std::vector<HeapOp> random_heap_ops(std::size_t count, std::uint64_t seed, Vertex id_pool) {
  if (id_pool == 0) throw Error(ErrorCode::invalid_params, "id pool must be nonempty");
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng); };

  // Shadow state, used only to make most generated operations legal.
  std::map<Vertex, Key> present;
  Key k0 = 0;
  std::vector<HeapOp> ops;
  ops.reserve(count);

  auto pick_present = [&]() -> Vertex {
    auto it = present.begin();
    std::advance(it, static_cast<long>(below(present.size())));
    return it->first;
  };
  auto pick_any = [&]() { return static_cast<Vertex>(below(id_pool)); };

  while (ops.size() < count) {
    const auto roll = below(100);
    HeapOp op{HeapOpKind::report_max};
    if (roll < 3) {
      // deliberate precondition violations
      switch (below(4)) {
        case 0: op = {HeapOpKind::insert, pick_any(), k0 + 2 + static_cast<Key>(below(3))}; break;
        case 1: op = {HeapOpKind::increment, pick_any()}; break;
        case 2: op = {HeapOpKind::decrement, pick_any()}; break;
        default: op = {present.empty() ? HeapOpKind::erase : HeapOpKind::insert,
                       present.empty() ? pick_any() : pick_present(), 0};
      }
    } else if (roll < 22) {
      const Vertex id = pick_any();
      op = {HeapOpKind::insert, id, static_cast<Key>(below(k0 + 2))};
    } else if (roll < 32) {
      op = {HeapOpKind::erase, present.empty() ? pick_any() : pick_present()};
    } else if (roll < 48) {
      op = {HeapOpKind::increment, present.empty() ? pick_any() : pick_present()};
    } else if (roll < 64) {
      op = {HeapOpKind::decrement, present.empty() ? pick_any() : pick_present()};
    } else if (roll < 74) {
      op = {HeapOpKind::increment_center};
    } else if (roll < 84) {
      op = {HeapOpKind::decrement_center};
    } else if (roll < 92) {
      op = {HeapOpKind::report_max};
    } else {
      op = {HeapOpKind::report_max_above_center};
    }

    // advance the shadow exactly as the reference semantics would
    switch (op.kind) {
      case HeapOpKind::insert:
        if (op.key <= k0 + 1 && !present.contains(op.id)) present.emplace(op.id, op.key);
        break;
      case HeapOpKind::erase: present.erase(op.id); break;
      case HeapOpKind::increment:
        if (auto it = present.find(op.id); it != present.end()) ++it->second;
        break;
      case HeapOpKind::decrement:
        if (auto it = present.find(op.id); it != present.end() && it->second > 0) --it->second;
        break;
      case HeapOpKind::increment_center: ++k0; break;
      case HeapOpKind::decrement_center:
        if (k0 > 0) --k0;
        break;
      default: break;
    }
    ops.push_back(op);
  }
  return ops;
}

// ---------------------------------------------------------------------------

std::string SearchVariant::name() const {
  if (variant == Variant::naive) return "naive";
  std::ostringstream out;
  out << "spectrum(alpha=" << alpha << ",beta=" << beta << ")";
  return out.str();
}

std::vector<SearchVariant> SearchOptions::default_variants() {
  return {
      {Variant::naive, 1, 2.0},
      {Variant::spectrum, 1, 2.0},
      {Variant::spectrum, 2, 1.5},
  };
}

namespace {

struct Floor {
  std::uint32_t arboricity;
  std::uint32_t min_max_out;
};

class Searcher {
 public:
  Searcher(const SearchOptions& options, SearchResult& result, std::size_t n)
      : options_(options), result_(result), n_(n) {
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) pairs_.emplace_back(a, b);
    }
    if (result.variant.variant == Variant::spectrum) {
      config_ = SpectrumConfig::make(result.variant.alpha, result.variant.beta);
    }
  }

  void run() {
    if (result_.variant.variant == Variant::naive) {
      OrientedGraph g(n_);
      g.inject_fault(options_.fault);
      dfs(g, 0, options_.max_ops);
    } else {
      SpectrumGraph g(n_, config_);
      g.inject_fault(options_.fault);
      dfs(g, 0, options_.max_ops);
    }
  }

 private:
  template <typename G>
  void dfs(const G& g, std::uint32_t delta_run, std::size_t remaining) {
    if (remaining == 0) return;
    if (result_.violations.size() >= options_.max_violations) return;
    if (options_.memoize) {
      const std::string key = state_key(g, delta_run);
      auto [it, fresh] = seen_.emplace(key, remaining);
      if (!fresh) {
        if (it->second >= remaining) return;
        it->second = remaining;
      }
    }
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const auto [a, b] = pairs_[p];
      G next = g;
      const bool insert = !(mask_ >> p & 1u);
      path_.push_back({insert, a, b});
      mask_ ^= 1u << p;
      ++result_.sequences;
      try {
        const UpdateStats stats = insert ? next.insert_edge(a, b) : next.delete_edge(a, b);
        const std::uint32_t run = std::max({delta_run, stats.peak_out_degree, stats.max_out_degree_after});
        if (inspect(next, stats, run, insert)) dfs(next, run, remaining - 1);
      } catch (const Error& e) {
        report(std::string("update threw ") + e.what(), 0, delta_run);
      }
      mask_ ^= 1u << p;
      path_.pop_back();
    }
  }

  template <typename G>
  std::string state_key(const G& g, std::uint32_t delta_run) const {
    std::string key;
    key.push_back(static_cast<char>(delta_run));
    for (Vertex w = 0; w < n_; ++w) {
      g.for_each_out(w, [&](EdgeId, Vertex x) { key.push_back(static_cast<char>(x)); });
      key.push_back('|');
    }
    return key;
  }

  const Floor& floor() {
    auto it = floors_.find(mask_);
    if (it != floors_.end()) return it->second;
    StaticGraph s{n_, {}};
    std::vector<std::uint32_t> adj(n_, 0);
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      if (mask_ >> p & 1u) {
        s.edges.push_back(pairs_[p]);
        adj[pairs_[p].first] |= 1u << pairs_[p].second;
        adj[pairs_[p].second] |= 1u << pairs_[p].first;
      }
    }
    return floors_.emplace(mask_, Floor{arboricity_of(n_, adj), min_max_outdegree(s)}).first->second;
  }

  void report(std::string what, std::uint32_t flips, std::uint32_t run) {
    if (result_.violations.size() >= options_.max_violations) return;
    result_.violations.push_back({std::move(what), Witness{n_, path_, flips, run}});
  }

  // false once the state is known to be broken, so the subtree is skipped
  bool inspect(const OrientedGraph& g, const UpdateStats& stats, std::uint32_t run, bool insert) {
    const std::size_t before = result_.violations.size();
    Witness& best = insert ? result_.best_insert : result_.best_delete;
    if (stats.flips > best.flips || best.trace.empty()) best = Witness{n_, path_, stats.flips, run};

    if (stats.flips + 1 != stats.recursion_depth) report("flip count disagrees with recursion depth", stats.flips, run);
    if (stats.chain_anomalies != 0) report("flip chain is not a -1 degree staircase", stats.flips, run);
    if (stats.flips > run + 1) {
      report("flips " + std::to_string(stats.flips) + " exceed delta_run + 1 = " + std::to_string(run + 1),
             stats.flips, run);
    }

    ValidationReport checks;
    if (result_.variant.variant == Variant::naive) {
      checks = validate_invariant2(g);
    } else {
      checks = validate_structure(g);
      checks.merge(validate_lists(g, config_.gamma));
      checks.merge(validate_invariant3(g, config_.gamma));
      checks.merge(validate_invariant1(g, config_.gamma));
    }
    if (!checks.ok()) report(checks.failures.front(), stats.flips, run);

    const Floor& f = floor();
    const std::uint32_t delta = g.max_out_degree();
    if (delta < f.min_max_out) report("max out-degree below the optimum", stats.flips, run);
    if (result_.variant.variant == Variant::naive) {
      for (double beta : {1.5, 2.0, 4.0}) {
        const double bound = theorem2_bound(f.arboricity, beta, n_);
        if (delta > bound + 1e-9) {
          std::ostringstream msg;
          msg << "max out-degree " << delta << " exceeds bound " << bound << " at beta " << beta;
          report(msg.str(), stats.flips, run);
        }
      }
    } else if (f.arboricity <= config_.alpha) {
      const std::uint32_t bound = config_.gamma + ceil_log(config_.beta, n_);
      if (delta > bound) {
        report("max out-degree " + std::to_string(delta) + " exceeds bound " + std::to_string(bound), stats.flips,
               run);
      }
    }
    return result_.violations.size() == before && checks.ok();
  }

  const SearchOptions& options_;
  SearchResult& result_;
  std::size_t n_;
  SpectrumConfig config_;
  std::vector<std::pair<Vertex, Vertex>> pairs_;
  std::vector<Update> path_;
  std::uint32_t mask_ = 0;
  std::unordered_map<std::uint32_t, Floor> floors_;
  std::unordered_map<std::string, std::size_t> seen_;
};

}  // namespace

std::vector<SearchResult> adversarial_search(const SearchOptions& options) {
  if (options.max_n > 8) throw Error(ErrorCode::too_large, "exhaustive search supports n <= 8");
  std::vector<SearchResult> results;
  for (const auto& variant : options.variants) {
    SearchResult result;
    result.variant = variant;
    for (std::size_t n = 2; n <= options.max_n; ++n) Searcher(options, result, n).run();
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace arbor::oracle
