// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "arbor/applications.hpp"
#include "arbor/oracle.hpp"
#include "arbor/replay.hpp"
#include "arbor/spectrum.hpp"
#include "arbor/workload.hpp"

namespace {

using arbor::OrientedGraph;
using arbor::TraceOpKind;
using arbor::Variant;
using arbor::Vertex;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::unique_ptr<OrientedGraph> make_graph(Variant v, std::size_t n, std::uint32_t alpha, double beta) {
  if (v == Variant::naive) return std::make_unique<OrientedGraph>(n);
  return std::make_unique<arbor::SpectrumGraph>(n, alpha, beta);
}

arbor::UpdateStats apply(OrientedGraph& g, const arbor::TraceOp& op) {
  return op.kind == TraceOpKind::insert ? g.insert_edge(op.u, op.v) : g.delete_edge(op.u, op.v);
}

// Flip-bound bookkeeping shared by criteria 1-3.
struct FlipLedger {
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::uint32_t worst_margin = 0;  // largest flips seen

  void add(const arbor::StatsReport& r) {
    ++runs;
    for (const auto& op : r.per_op) {
      if (op.flips > r.max_delta + 1) ++violations;
      worst_margin = std::max(worst_margin, op.flips);
    }
  }
};

FlipLedger flip_ledger;

Outcome degree_bound() {
  constexpr std::size_t n = 1024;
  constexpr double betas[] = {1.5, 2.0, 4.0};
  std::size_t violations = 0;
  std::size_t failures = 0;
  std::uint32_t worst_slack = 1000;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::uint32_t alpha = 1 + s % 3;
    const auto trace = arbor::generate_workload({"forest-union", n, alpha, 100000, 1000 + s});

    arbor::ReplayConfig naive{Variant::naive, alpha, 2.0, arbor::CheckMode::fast, arbor::Fault::none};
    const auto nr = arbor::replay(trace, naive);
    failures += nr.exit_code() != 0;
    flip_ledger.add(nr);
    for (double beta : betas) {
      const double bound = arbor::oracle::theorem2_bound(alpha, beta, n);
      for (const auto& op : nr.per_op) {
        if (op.max_out_degree_after > bound) ++violations;
      }
      worst_slack = std::min(worst_slack, static_cast<std::uint32_t>(bound) - nr.max_delta);

      arbor::ReplayConfig spectrum{Variant::spectrum, alpha, beta, arbor::CheckMode::fast, arbor::Fault::none};
      const auto sr = arbor::replay(trace, spectrum);
      failures += sr.exit_code() != 0;
      flip_ledger.add(sr);
      for (const auto& op : sr.per_op) {
        if (op.max_out_degree_after > bound) ++violations;
      }
      if (sr.max_delta <= bound) worst_slack = std::min(worst_slack, static_cast<std::uint32_t>(bound) - sr.max_delta);
    }
  }
  return {violations == 0 && failures == 0, "80 runs, steps over the bound: " + std::to_string(violations) +
                                                ", failed runs: " + std::to_string(failures) +
                                                ", smallest slack: " + std::to_string(worst_slack)};
}

Outcome invariants() {
  std::size_t failures = 0;
  std::size_t runs = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::uint32_t alpha = 1 + s % 3;
    const auto trace = arbor::generate_workload({"forest-union", 64, alpha, 10000, 2000 + s});
    for (Variant v : {Variant::naive, Variant::spectrum}) {
      arbor::ReplayConfig config{v, alpha, 2.0, arbor::CheckMode::full, arbor::Fault::none};
      const auto r = arbor::replay(trace, config);
      ++runs;
      failures += r.invariant_failures.size() + (r.error ? 1 : 0);
      flip_ledger.add(r);
    }
  }
  return {failures == 0, std::to_string(runs) + " full-check runs, failures: " + std::to_string(failures)};
}

Outcome flip_bound() {
  return {flip_ledger.violations == 0 && flip_ledger.runs == 100,
          std::to_string(flip_ledger.runs) + " runs, updates over the flip bound: " +
              std::to_string(flip_ledger.violations) + ", most flips in one update: " +
              std::to_string(flip_ledger.worst_margin)};
}

Outcome sandwich() {
  std::mt19937_64 rng(4242);
  std::size_t bad = 0;
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 2 + rng() % 11;
    const unsigned density = 1 + rng() % 9;  // edge probability density/10
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) {
        if (rng() % 10 < density) pairs.push_back(rng() % 2 ? std::pair{a, b} : std::pair{b, a});
      }
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    arbor::oracle::StaticGraph sg{n, pairs};
    const auto alpha = arbor::oracle::arboricity_exact(sg);
    const auto floor = arbor::oracle::min_max_outdegree(sg);
    if (floor + 1 < alpha || floor > alpha) ++bad;
    const double bound = arbor::oracle::theorem2_bound(alpha, 2.0, n);
    for (Variant v : {Variant::naive, Variant::spectrum}) {
      auto g = make_graph(v, n, alpha, 2.0);
      for (const auto& [a, b] : pairs) g->insert_edge(a, b);
      if (g->max_out_degree() < floor || g->max_out_degree() > bound) ++bad;
    }
  }
  return {bad == 0, "200 graphs, sandwich violations: " + std::to_string(bad)};
}

Outcome heap_differential() {
  const auto ops = arbor::oracle::random_heap_ops(1000000, 77);
  const auto expected = arbor::oracle::reference_heap_replay(0, ops);
  const auto actual = arbor::oracle::neighbor_heap_replay(0, ops);
  std::size_t mismatches = expected.size() == actual.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(expected.size(), actual.size()); ++i) mismatches += !(expected[i] == actual[i]);
  return {mismatches == 0, "1000000 ops, mismatches: " + std::to_string(mismatches)};
}

// Counted primitive steps per update stay within kWork times the shape
// gamma * (Delta + 1) for insertions and Delta + 1 for deletions.
constexpr std::uint64_t kWork = 16;

Outcome work_bounds() {
  std::size_t bad = 0;
  std::uint64_t worst_insert = 0;
  std::uint64_t worst_delete = 0;
  for (std::uint32_t alpha : {1u, 2u, 3u}) {
    for (double beta : {1.5, 2.0, 4.0}) {
      const auto trace = arbor::generate_workload({"forest-union", 1024, alpha, 50000, 3000 + alpha});
      arbor::SpectrumGraph g(1024, alpha, beta);
      const std::uint64_t gamma = g.gamma();
      for (const auto& op : trace.ops) {
        const auto s = apply(g, op);
        const std::uint64_t delta = s.peak_out_degree + 1;
        const std::uint64_t total = s.work.total();
        if (op.kind == TraceOpKind::insert) {
          if (s.work.max_scan_per_step > gamma - 1) ++bad;
          if (s.work.heap_updates > kWork * delta + 2 * s.recursion_depth) ++bad;
          if (total > kWork * gamma * delta) ++bad;
          worst_insert = std::max(worst_insert, (total + gamma * delta - 1) / (gamma * delta));
        } else {
          if (s.work.max_splices_per_step > 2 || s.work.list_scanned != 0) ++bad;
          if (total > kWork * delta) ++bad;
          worst_delete = std::max(worst_delete, (total + delta - 1) / delta);
        }
      }
    }
  }
  return {bad == 0, "c = " + std::to_string(kWork) + ", violations: " + std::to_string(bad) +
                        ", largest ratio insert/delete: " + std::to_string(worst_insert) + "/" +
                        std::to_string(worst_delete)};
}

Outcome applications() {
  std::size_t bad = 0;

  {
    const auto trace = arbor::generate_workload({"forest-union", 200, 2, 10000, 5000});
    for (Variant v : {Variant::naive, Variant::spectrum}) {
      auto g = make_graph(v, 200, 2, 2.0);
      arbor::MaximalMatching m(*g);
      for (const auto& op : trace.ops) {
        apply(*g, op);
        bad += !m.check().ok();
      }
    }
  }

  {
    std::mt19937_64 rng(5001);
    const std::size_t n = 300;
    OrientedGraph g(n);
    arbor::AdjacencyIndex idx(g);
    std::set<std::pair<Vertex, Vertex>> mirror;
    std::vector<std::pair<Vertex, Vertex>> listed;
    for (int step = 0; step < 100000; ++step) {
      Vertex u = static_cast<Vertex>(rng() % n);
      Vertex v = static_cast<Vertex>(rng() % n);
      if (u > v) std::swap(u, v);
      const unsigned action = rng() % 4;
      if (action == 0 && u != v && !mirror.count({u, v}) && mirror.size() < 2 * n) {
        g.insert_edge(u, v);
        mirror.insert({u, v});
        listed.push_back({u, v});
      } else if (action == 1 && !listed.empty()) {
        const std::size_t i = rng() % listed.size();
        g.delete_edge(listed[i].second, listed[i].first);
        mirror.erase(listed[i]);
        listed[i] = listed.back();
        listed.pop_back();
      }
      const auto probe = action == 2 && !listed.empty() ? listed[rng() % listed.size()] : std::pair{u, v};
      bad += idx.adjacent(probe.first, probe.second) != (mirror.count(probe) > 0);
      bad += idx.adjacent(probe.second, probe.first) != (mirror.count(probe) > 0);
    }
  }

  {
    std::mt19937_64 rng(5002);
    const std::size_t n = 32;
    const auto support = arbor::generate_workload({"forest-union", n, 2, 1000, 5003});
    arbor::SpectrumGraph g(n, 2, 2.0);
    arbor::MatVecState<long long> mv(g);
    for (const auto& op : support.ops) {
      if (op.kind == TraceOpKind::insert) {
        mv.set_weight(op.u, op.v, 1 + static_cast<long long>(rng() % 50));
      } else {
        mv.set_weight(op.u, op.v, 0);
      }
      switch (rng() % 3) {
        case 0: mv.set_x(static_cast<Vertex>(rng() % n), static_cast<long long>(rng() % 201) - 100); break;
        case 1: {
          const Vertex i = static_cast<Vertex>(rng() % n);
          mv.set_weight(i, i, static_cast<long long>(rng() % 7));
          break;
        }
        default: break;
      }
      const auto y = mv.naive_product();
      for (Vertex i = 0; i < n; ++i) bad += mv.query(i) != y[i];
    }
  }

  return {bad == 0, "matching, adjacency and matvec mismatches: " + std::to_string(bad)};
}

Outcome exhaustive() {
  arbor::oracle::SearchOptions options;
  options.max_n = 4;
  options.max_ops = 8;
  std::size_t violations = 0;
  std::uint64_t sequences = 0;
  std::string best;
  for (const auto& r : arbor::oracle::adversarial_search(options)) {
    violations += r.violations.size();
    sequences += r.sequences;
    best += " " + r.variant.name() + "=" + std::to_string(r.best_flips());
  }
  return {violations == 0, std::to_string(sequences) + " sequences, violations: " + std::to_string(violations) +
                               ", most flips:" + best};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"degree bound", degree_bound},
      {"invariants under full checks", invariants},
      {"flip bound", flip_bound},
      {"oracle sandwich", sandwich},
      {"heap differential", heap_differential},
      {"work counters", work_bounds},
      {"applications", applications},
      {"exhaustive small instances", exhaustive},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%s; %.1f s)\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
