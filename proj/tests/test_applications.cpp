#include <doctest.h>

#include <memory>
#include <random>
#include <set>

#include "arbor/applications.hpp"
#include "arbor/spectrum.hpp"
#include "arbor/workload.hpp"
#include "check.hpp"

using arbor::ErrorCode;
using arbor::OrientedGraph;
using arbor::Vertex;

TEST_SUITE("applications") {
  TEST_CASE("matching on a single edge") {
    OrientedGraph g(3);
    arbor::MaximalMatching m(g);
    g.insert_edge(1, 2);
    CHECK(m.mate(1) == std::optional<Vertex>{2});
    CHECK(m.mate(2) == std::optional<Vertex>{1});
    CHECK(m.size() == 1);
    CHECK(m.is_free(0));
    CHECK(m.check().ok());
    CHECK_ERROR_CODE(m.mate(3), ErrorCode::unknown_vertex);
  }

  TEST_CASE("matching on a path") {
    OrientedGraph g(5);
    arbor::MaximalMatching m(g);
    g.insert_edge(1, 2);
    g.insert_edge(2, 3);
    g.insert_edge(3, 4);
    CHECK(m.mate(1) == std::optional<Vertex>{2});
    CHECK(m.mate(3) == std::optional<Vertex>{4});
    g.delete_edge(1, 2);
    CHECK(m.size() == 1);
    CHECK(m.is_free(1));
    CHECK(m.is_free(2));
    CHECK(m.mate(3) == std::optional<Vertex>{4});
    CHECK(m.check().ok());
  }

  TEST_CASE("matching attached to a populated graph") {
    OrientedGraph g(6);
    for (Vertex v = 1; v < 6; ++v) g.insert_edge(0, v);
    arbor::MaximalMatching m(g);
    CHECK(m.size() == 1);
    CHECK(m.check().ok());
    g.delete_edge(0, *m.mate(0));
    CHECK(m.size() == 1);
    CHECK(m.check().ok());
  }

  TEST_CASE("matching stays maximal under churn") {
    for (auto variant : {arbor::Variant::naive, arbor::Variant::spectrum}) {
      const auto trace = arbor::generate_workload({"forest-union", 40, 2, 3000, 8});
      std::unique_ptr<OrientedGraph> g = variant == arbor::Variant::naive
                                             ? std::make_unique<OrientedGraph>(40)
                                             : std::make_unique<arbor::SpectrumGraph>(40, 2, 2.0);
      arbor::MaximalMatching m(*g);
      std::size_t bad = 0;
      for (const auto& op : trace.ops) {
        if (op.kind == arbor::TraceOpKind::insert) {
          g->insert_edge(op.u, op.v);
        } else {
          g->delete_edge(op.u, op.v);
        }
        bad += !m.check().ok();
      }
      CHECK(bad == 0);
    }
  }

  TEST_CASE("adjacency") {
    OrientedGraph g(4);
    arbor::AdjacencyIndex idx(g);
    g.insert_edge(1, 2);
    g.insert_edge(1, 3);
    g.insert_edge(2, 3);
    CHECK(idx.adjacent(1, 3));
    CHECK(idx.adjacent(3, 1));
    CHECK_FALSE(idx.adjacent(0, 1));
    CHECK_FALSE(idx.adjacent(2, 2));
    CHECK_ERROR_CODE(idx.adjacent(0, 4), ErrorCode::unknown_vertex);
  }

  TEST_CASE("adjacency against an edge-set mirror") {
    std::mt19937_64 rng(4);
    const std::size_t n = 30;
    OrientedGraph g(n);
    arbor::AdjacencyIndex idx(g);
    std::set<std::pair<Vertex, Vertex>> mirror;
    std::size_t mismatches = 0;
    for (int step = 0; step < 20000; ++step) {
      Vertex u = static_cast<Vertex>(rng() % n);
      Vertex v = static_cast<Vertex>(rng() % n);
      if (u > v) std::swap(u, v);
      const bool present = mirror.count({u, v}) > 0;
      switch (rng() % 3) {
        case 0:
          if (u != v && !present && mirror.size() < 90) {
            g.insert_edge(u, v);
            mirror.insert({u, v});
          }
          break;
        case 1:
          if (present) {
            g.delete_edge(v, u);
            mirror.erase({u, v});
          }
          break;
        default: break;
      }
      mismatches += idx.adjacent(u, v) != (mirror.count({u, v}) > 0);
      mismatches += idx.adjacent(v, u) != (mirror.count({u, v}) > 0);
    }
    CHECK(mismatches == 0);
    CHECK(idx.check().ok());
  }

  TEST_CASE("matvec examples") {
    OrientedGraph zero(5);
    arbor::MatVecState<double> z(zero);
    z.set_x(2, 4.0);
    for (Vertex i = 0; i < 5; ++i) CHECK(z.query(i) == 0.0);

    OrientedGraph g(2);
    arbor::MatVecState<double> mv(g);
    CHECK(mv.set_weight(0, 1, 3.0).has_value());
    mv.set_x(0, 1.0);
    mv.set_x(1, 2.0);
    CHECK(mv.query(0) == 6.0);
    CHECK(mv.query(1) == 3.0);
    mv.set_weight(1, 1, 0.5);
    CHECK(mv.query(1) == 4.0);
    mv.set_weight(1, 0, 0.0);
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK(mv.query(0) == 0.0);
    CHECK(mv.validate().ok());
    CHECK_ERROR_CODE(mv.query(2), ErrorCode::unknown_vertex);
  }

  TEST_CASE("matvec survives flips") {
    OrientedGraph g(4);
    arbor::MatVecState<long long> mv(g);
    mv.set_weight(0, 1, 5);
    mv.set_weight(2, 3, 7);
    for (Vertex j = 0; j < 4; ++j) mv.set_x(j, j + 1);
    mv.set_weight(0, 2, 11);  // flips 0->1
    CHECK(mv.flip_work() == 1);
    CHECK(mv.query(0) == 5 * 2 + 11 * 3);
    CHECK(mv.query(1) == 5 * 1);
    CHECK(mv.query(2) == 7 * 4 + 11 * 1);
    CHECK(mv.validate().ok());
  }

  TEST_CASE("matvec over random integer updates") {
    std::mt19937_64 rng(21);
    const std::size_t n = 32;
    arbor::SpectrumGraph g(n, 2, 2.0);
    arbor::MatVecState<long long> mv(g);
    const auto support = arbor::generate_workload({"forest-union", n, 2, 400, 5});
    std::size_t bad = 0;
    for (const auto& op : support.ops) {
      const long long w = op.kind == arbor::TraceOpKind::insert ? 1 + static_cast<long long>(rng() % 9) : 0;
      mv.set_weight(op.u, op.v, w);
      mv.set_x(static_cast<Vertex>(rng() % n), static_cast<long long>(rng() % 21) - 10);
      if (rng() % 4 == 0) mv.set_weight(static_cast<Vertex>(rng() % n), static_cast<Vertex>(rng() % n), 0);
      bad += !mv.validate().ok();
    }
    CHECK(bad == 0);
  }
}
