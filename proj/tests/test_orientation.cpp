#include <doctest.h>

#include <memory>
#include <random>
#include <set>

#include "arbor/oriented_graph.hpp"
#include "arbor/spectrum.hpp"
#include "check.hpp"
#include "literal_sim.hpp"

using arbor::Arc;
using arbor::EdgeEvent;
using arbor::EdgeEventKind;
using arbor::ErrorCode;
using arbor::OrientedGraph;
using arbor::Vertex;

namespace {

std::vector<Vertex> heads(const OrientedGraph& g, Vertex u) {
  std::vector<Vertex> out;
  g.for_each_out(u, [&](arbor::EdgeId, Vertex h) { out.push_back(h); });
  return out;
}

struct Recorder {
  std::vector<EdgeEvent> events;
  explicit Recorder(OrientedGraph& g) {
    g.register_flip_observer([this](const EdgeEvent& ev) { events.push_back(ev); });
  }
};

}  // namespace

TEST_SUITE("orientation") {
  TEST_CASE("graph_new") {
    OrientedGraph one(1);
    CHECK(one.vertex_count() == 1);
    CHECK(one.max_out_degree() == 0);

    OrientedGraph four(4);
    CHECK(four.edge_count() == 0);
    CHECK(arbor::validate_invariant2(four).ok());

    CHECK_ERROR_CODE(OrientedGraph(0), ErrorCode::invalid_size);
  }

  TEST_CASE("triangle") {
    OrientedGraph g(4);
    auto s = g.insert_edge(1, 2);
    CHECK(g.orientation_of(1, 2) == Arc{1, 2});
    CHECK(g.max_out_degree() == 1);
    CHECK(s.flips == 0);
    s = g.insert_edge(1, 3);
    CHECK(g.orientation_of(1, 3) == Arc{3, 1});
    CHECK(s.flips == 0);
    s = g.insert_edge(2, 3);
    CHECK(g.orientation_of(2, 3) == Arc{2, 3});
    CHECK(s.flips == 0);
    CHECK(g.max_out_degree() == 1);
    CHECK(arbor::validate_invariant2(g).ok());

    CHECK(g.out_degree(1) == 1);
    CHECK(g.orientation_of(2, 1) == Arc{1, 2});

    s = g.delete_edge(2, 3);
    CHECK(s.flips == 0);
    CHECK_FALSE(g.has_edge(2, 3));
    CHECK(g.max_out_degree() == 1);
    CHECK(arbor::validate_invariant2(g).ok());
  }

  TEST_CASE("star on nine vertices") {
    OrientedGraph g(9);
    sim::LiteralOrientation ref(9, 0);
    for (Vertex i = 1; i <= 8; ++i) {
      const auto s = g.insert_edge(0, i);
      CHECK(s.flips == ref.insert(0, i));
      CHECK(s.flips == 0);
      CHECK(g.max_out_degree() == 1);
      CHECK(g.max_out_degree() <= 6);
      CHECK(arbor::validate_invariant2(g).ok());
    }
    CHECK(heads(g, 0) == std::vector<Vertex>{1});
    for (Vertex i = 2; i <= 8; ++i) CHECK(heads(g, i) == std::vector<Vertex>{0});
  }

  TEST_CASE("delete") {
    OrientedGraph g(2);
    g.insert_edge(0, 1);
    const auto s = g.delete_edge(1, 0);
    CHECK(s.flips == 0);
    CHECK(g.edge_count() == 0);
    CHECK(g.max_out_degree() == 0);

    OrientedGraph empty(3);
    CHECK_ERROR_CODE(empty.delete_edge(0, 1), ErrorCode::no_such_edge);
    CHECK_ERROR_CODE(empty.orientation_of(0, 1), ErrorCode::no_such_edge);
  }

  TEST_CASE("insert preconditions") {
    OrientedGraph g(3);
    CHECK_ERROR_CODE(g.insert_edge(1, 1), ErrorCode::self_loop);
    CHECK_ERROR_CODE(g.insert_edge(0, 3), ErrorCode::unknown_vertex);
    CHECK_ERROR_CODE(g.out_degree(7), ErrorCode::unknown_vertex);
    g.insert_edge(0, 1);
    CHECK_ERROR_CODE(g.insert_edge(1, 0), ErrorCode::duplicate_edge);
    CHECK(g.edge_count() == 1);
    CHECK(arbor::validate_invariant2(g).ok());
  }

  TEST_CASE("disjoint edges") {
    OrientedGraph g(20);
    CHECK(g.max_out_degree() == 0);
    for (Vertex i = 0; i < 20; i += 2) g.insert_edge(i, i + 1);
    CHECK(g.max_out_degree() == 1);
  }

  TEST_CASE("edge validity validator") {
    const std::vector<Arc> arcs{{0, 1}, {0, 2}};
    const auto g = OrientedGraph::from_arcs(3, arcs);
    const auto report = arbor::validate_invariant2(g);
    CHECK(report.failures.size() == 2);  // both out-edges of 0 are violated
    CHECK(arbor::validate_structure(g).ok());
    CHECK(arbor::validate_invariant2(OrientedGraph(5)).ok());
  }

  TEST_CASE("events") {
    SUBCASE("plain insert") {
      OrientedGraph g(3);
      Recorder rec(g);
      g.insert_edge(0, 1);
      REQUIRE(rec.events.size() == 1);
      CHECK(rec.events[0].kind == EdgeEventKind::added);
      CHECK(rec.events[0].arc == Arc{0, 1});
    }
    SUBCASE("insert with one recursion") {
      OrientedGraph g(4);
      g.insert_edge(0, 1);
      g.insert_edge(2, 3);
      Recorder rec(g);
      const auto s = g.insert_edge(0, 2);
      CHECK(s.flips == 1);
      CHECK(s.recursion_depth == 2);
      REQUIRE(rec.events.size() == 2);
      CHECK(rec.events[0].kind == EdgeEventKind::added);
      CHECK(rec.events[0].arc == Arc{0, 2});
      CHECK(rec.events[1].kind == EdgeEventKind::flipped);
      CHECK(rec.events[1].arc == Arc{1, 0});
      CHECK(rec.events[1].edge == g.edge_id(0, 1));
      CHECK(arbor::validate_invariant2(g).ok());
    }
    SUBCASE("plain delete") {
      OrientedGraph g(3);
      g.insert_edge(0, 1);
      g.insert_edge(1, 2);
      Recorder rec(g);
      g.delete_edge(0, 1);
      REQUIRE(rec.events.size() == 1);
      CHECK(rec.events[0].kind == EdgeEventKind::removed);
    }
    SUBCASE("delete with a flip reports the flip first") {
      const std::vector<Arc> arcs{{0, 1}, {2, 0}, {2, 3}, {3, 4}};
      auto g = OrientedGraph::from_arcs(5, arcs);
      REQUIRE(arbor::validate_invariant2(g).ok());
      Recorder rec(g);
      const auto s = g.delete_edge(0, 1);
      CHECK(s.flips == 1);
      REQUIRE(rec.events.size() == 2);
      CHECK(rec.events[0].kind == EdgeEventKind::flipped);
      CHECK(rec.events[0].arc == Arc{0, 2});
      CHECK(rec.events[1].kind == EdgeEventKind::removed);
      CHECK(rec.events[1].arc == Arc{0, 1});
      CHECK(arbor::validate_invariant2(g).ok());
    }
    SUBCASE("unregister and copies") {
      OrientedGraph g(4);
      int calls = 0;
      const auto sub = g.register_flip_observer([&](const EdgeEvent&) { ++calls; });
      g.insert_edge(0, 1);
      OrientedGraph copy = g;
      copy.insert_edge(2, 3);
      CHECK(calls == 1);
      g.unregister_flip_observer(sub);
      g.insert_edge(1, 2);
      CHECK(calls == 1);
    }
  }

  TEST_CASE("insert-only sequences match the literal procedure") {
    for (std::uint32_t gamma : {0u, 2u, 3u, 5u}) {
      for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const std::size_t n = 10 + seed * 3;
        std::mt19937_64 rng(seed * 31 + gamma);
        std::unique_ptr<OrientedGraph> g;
        if (gamma == 0) {
          g = std::make_unique<OrientedGraph>(n);
        } else {
          g = std::make_unique<arbor::SpectrumGraph>(n, 1, static_cast<double>(gamma));
        }
        sim::LiteralOrientation ref(n, gamma);
        std::set<std::pair<Vertex, Vertex>> present;
        const std::size_t target = std::min<std::size_t>(n * (n - 1) / 2, 5 * n);
        while (present.size() < target) {
          Vertex u = static_cast<Vertex>(rng() % n);
          Vertex v = static_cast<Vertex>(rng() % n);
          if (u == v || present.count({std::min(u, v), std::max(u, v)})) continue;
          present.insert({std::min(u, v), std::max(u, v)});
          const auto s = g->insert_edge(u, v);
          REQUIRE(s.flips == ref.insert(u, v));
          CHECK(s.chain_anomalies == 0);
        }
        for (Vertex w = 0; w < n; ++w) CHECK(heads(*g, w) == ref.out(w));
        CHECK(g->max_out_degree() == ref.max_degree());
      }
    }
  }

  TEST_CASE("a deletion chain of three flips") {
    // 0 -> 1 is removed. The in-neighbors 2, 3, 4 of the chain have out-degrees
    // 2, 3, 4; vertices 5..11 form a regular tournament of out-degree 3 that
    // keeps every other edge valid.
    for (auto variant : {arbor::Variant::naive, arbor::Variant::spectrum}) {
      std::vector<Arc> arcs{{0, 1}, {2, 0}, {2, 10}, {3, 2}, {3, 8}, {3, 9}, {4, 3}, {4, 5}, {4, 6}, {4, 7}};
      for (Vertex i = 0; i < 7; ++i) {
        for (Vertex step : {1u, 2u, 4u}) arcs.push_back({5 + i, 5 + (i + step) % 7});
      }
      auto g = variant == arbor::Variant::naive
                   ? std::make_unique<OrientedGraph>(OrientedGraph::from_arcs(12, arcs))
                   : std::make_unique<OrientedGraph>(arbor::SpectrumGraph::from_arcs(12, arbor::SpectrumConfig::make(1, 2.0), arcs));
      REQUIRE(arbor::validate_invariant2(*g).ok());
      REQUIRE(arbor::validate_lists(*g, 2).ok());
      Recorder rec(*g);
      const auto s = g->delete_edge(0, 1);
      CHECK(s.flips == 3);
      CHECK(s.chain_anomalies == 0);
      CHECK(s.flips <= s.peak_out_degree + 1);
      REQUIRE(rec.events.size() == 4);
      CHECK(rec.events[0].arc == Arc{0, 2});
      CHECK(rec.events[1].arc == Arc{2, 3});
      CHECK(rec.events[2].arc == Arc{3, 4});
      CHECK(rec.events[3].kind == EdgeEventKind::removed);
      CHECK(g->max_out_degree() == 3);
      CHECK(arbor::validate_invariant2(*g).ok());
      CHECK(arbor::validate_lists(*g, 2).ok());
    }
  }

  TEST_CASE("random churn keeps every edge valid") {
    std::mt19937_64 rng(99);
    const std::size_t n = 24;
    OrientedGraph g(n);
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::uint32_t delta_run = 0;
    for (int step = 0; step < 3000; ++step) {
      arbor::UpdateStats s;
      if (!edges.empty() && (edges.size() > 80 || rng() % 3 == 0)) {
        const std::size_t i = rng() % edges.size();
        s = g.delete_edge(edges[i].first, edges[i].second);
        edges[i] = edges.back();
        edges.pop_back();
      } else {
        const Vertex u = static_cast<Vertex>(rng() % n);
        const Vertex v = static_cast<Vertex>(rng() % n);
        if (u == v || g.has_edge(u, v)) continue;
        s = g.insert_edge(u, v);
        edges.emplace_back(u, v);
      }
      delta_run = std::max(delta_run, s.peak_out_degree);
      CHECK(s.flips + 1 == s.recursion_depth);
      CHECK(s.flips <= delta_run + 1);
      CHECK(s.chain_anomalies == 0);
      REQUIRE(arbor::validate_invariant2(g).ok());
    }
  }

  TEST_CASE("edge ids survive flips") {
    OrientedGraph g(4);
    g.insert_edge(0, 1);
    const auto id = g.edge_id(0, 1);
    g.insert_edge(2, 3);
    g.insert_edge(0, 2);
    CHECK(g.orientation_of(0, 1) == Arc{1, 0});
    CHECK(g.edge_id(1, 0) == id);
  }
}
