#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "arbor/oriented_graph.hpp"

namespace arbor {

/// Maximal matching kept up to date through the graph's edge events.
///
/// free_in(w) holds the in-edges of w whose tail is currently unmatched, as an
/// intrusive list indexed by edge id, so an unmatched in-neighbor is found in
/// O(1). A vertex whose status changes touches only its own out-edges.
class MaximalMatching {
 public:
  struct Work {
    std::uint64_t matches = 0;
    std::uint64_t notifications = 0;  // free_in membership refreshes
    std::uint64_t scanned = 0;        // out-neighbors inspected while rematching
  };

  explicit MaximalMatching(OrientedGraph& g);
  ~MaximalMatching();
  MaximalMatching(const MaximalMatching&) = delete;
  MaximalMatching& operator=(const MaximalMatching&) = delete;

  std::optional<Vertex> mate(Vertex u) const;
  bool is_free(Vertex u) const;
  std::size_t size() const noexcept { return pairs_; }
  std::vector<Vertex> free_in(Vertex w) const;

  const Work& work() const noexcept { return work_; }
  void reset_work() noexcept { work_ = {}; }

  /// Involution, matched pairs are edges, maximality, free_in contents.
  ValidationReport check() const;

 private:
  void on_event(const EdgeEvent& ev);
  void sync(EdgeId e);
  void unlink(EdgeId e);
  void sync_out_edges(Vertex u);
  void match(Vertex u, Vertex v);
  void rematch(Vertex u);
  void reserve(EdgeId e);
  Vertex check_vertex(Vertex u) const;

  OrientedGraph& graph_;
  Subscription subscription_ = 0;
  std::vector<Vertex> mate_;
  std::size_t pairs_ = 0;
  std::vector<EdgeId> first_;   // per vertex: head of free_in list
  std::vector<Vertex> owner_;   // per edge: list it is in, or kNoVertex
  std::vector<EdgeId> prev_;
  std::vector<EdgeId> next_;
  Work work_;
};

/// Ordered out-neighbor sets driven by edge events; adjacency in O(log Delta).
class AdjacencyIndex {
 public:
  explicit AdjacencyIndex(OrientedGraph& g);
  ~AdjacencyIndex();
  AdjacencyIndex(const AdjacencyIndex&) = delete;
  AdjacencyIndex& operator=(const AdjacencyIndex&) = delete;

  bool adjacent(Vertex u, Vertex v) const;
  const std::set<Vertex>& out_set(Vertex u) const;
  ValidationReport check() const;

 private:
  OrientedGraph& graph_;
  Subscription subscription_ = 0;
  std::vector<std::set<Vertex>> out_;
};

/// y = A x for a symmetric A supported on the graph plus a diagonal.
///
/// Every vertex i keeps s_i = sum of a_ij * x_j over its in-neighbors j, so a
/// query only walks out-neighbors and a change of x_j only touches the
/// out-neighbors of j. A flip moves one term between two sums.
///
/// Edges that enter the graph without set_weight (for example through a
/// plain insert_edge) get `default_weight`.
template <typename Scalar>
class MatVecState {
  static_assert(std::is_arithmetic_v<Scalar>);

 public:
  explicit MatVecState(OrientedGraph& g, Scalar default_weight = Scalar{1})
      : graph_(g),
        default_weight_(default_weight),
        diagonal_(g.vertex_count(), Scalar{0}),
        x_(g.vertex_count(), Scalar{0}),
        s_(g.vertex_count(), Scalar{0}) {
    g.for_each_edge([&](EdgeId e, Vertex, Vertex) { weight_slot(e) = default_weight_; });
    subscription_ = g.register_flip_observer([this](const EdgeEvent& ev) { on_event(ev); });
  }
  ~MatVecState() { graph_.unregister_flip_observer(subscription_); }
  MatVecState(const MatVecState&) = delete;
  MatVecState& operator=(const MatVecState&) = delete;

  /// w != 0 on a missing edge inserts it, w == 0 deletes it, i == j sets the
  /// diagonal. Returns the graph update's statistics if the edge set changed.
  std::optional<UpdateStats> set_weight(Vertex i, Vertex j, Scalar w) {
    check(i);
    check(j);
    if (i == j) {
      diagonal_[i] = w;
      return std::nullopt;
    }
    if (!graph_.has_edge(i, j)) {
      if (w == Scalar{0}) return std::nullopt;
      pending_ = w;
      const UpdateStats stats = graph_.insert_edge(i, j);
      pending_.reset();
      return stats;
    }
    if (w == Scalar{0}) return graph_.delete_edge(i, j);
    const EdgeId e = graph_.edge_id(i, j);
    const Arc a = graph_.arc(e);
    s_[a.head] += (w - weights_[e]) * x_[a.tail];
    weights_[e] = w;
    return std::nullopt;
  }

  void set_x(Vertex j, Scalar value) {
    check(j);
    const Scalar delta = value - x_[j];
    graph_.for_each_out(j, [&](EdgeId e, Vertex h) { s_[h] += weights_[e] * delta; });
    x_[j] = value;
  }

  Scalar query(Vertex i) const {
    check(i);
    Scalar y = s_[i] + diagonal_[i] * x_[i];
    graph_.for_each_out(i, [&](EdgeId e, Vertex h) { y += weights_[e] * x_[h]; });
    return y;
  }

  Scalar weight(Vertex i, Vertex j) const {
    check(i);
    check(j);
    if (i == j) return diagonal_[i];
    return graph_.has_edge(i, j) ? weights_[graph_.edge_id(i, j)] : Scalar{0};
  }
  Scalar x(Vertex j) const { return x_[check(j)]; }
  std::uint64_t flip_work() const noexcept { return flip_work_; }

  /// y_i from scratch over all edges, for comparison with query().
  std::vector<Scalar> naive_product() const {
    std::vector<Scalar> y(x_.size(), Scalar{0});
    for (std::size_t i = 0; i < x_.size(); ++i) y[i] = diagonal_[i] * x_[i];
    graph_.for_each_edge([&](EdgeId e, Vertex t, Vertex h) {
      y[t] += weights_[e] * x_[h];
      y[h] += weights_[e] * x_[t];
    });
    return y;
  }

  /// Compares the partial sums and every query against naive recomputation;
  /// floating types use a relative tolerance.
  ValidationReport validate(double tolerance = 1e-9) const {
    ValidationReport report;
    std::vector<Scalar> in_sum(x_.size(), Scalar{0});
    graph_.for_each_edge([&](EdgeId e, Vertex t, Vertex h) { in_sum[h] += weights_[e] * x_[t]; });
    const auto y = naive_product();
    for (Vertex i = 0; i < x_.size(); ++i) {
      if (!close(s_[i], in_sum[i], tolerance)) report.failures.push_back("partial sum of " + std::to_string(i) + " is stale");
      if (!close(query(i), y[i], tolerance)) report.failures.push_back("query " + std::to_string(i) + " disagrees");
    }
    return report;
  }

 private:
  Vertex check(Vertex u) const {
    if (u >= x_.size()) throw Error(ErrorCode::unknown_vertex, "vertex " + std::to_string(u));
    return u;
  }

  static bool close(Scalar a, Scalar b, double tolerance) {
    if constexpr (std::is_integral_v<Scalar>) {
      return a == b;
    } else {
      const double scale = std::max({1.0, std::abs(static_cast<double>(a)), std::abs(static_cast<double>(b))});
      return std::abs(static_cast<double>(a) - static_cast<double>(b)) <= tolerance * scale;
    }
  }

  Scalar& weight_slot(EdgeId e) {
    if (e >= weights_.size()) weights_.resize(e + 1, Scalar{0});
    return weights_[e];
  }

  void on_event(const EdgeEvent& ev) {
    const Vertex t = ev.arc.tail;
    const Vertex h = ev.arc.head;
    switch (ev.kind) {
      case EdgeEventKind::added:
        weight_slot(ev.edge) = pending_.value_or(default_weight_);
        s_[h] += weights_[ev.edge] * x_[t];
        break;
      case EdgeEventKind::removed:
        s_[h] -= weights_[ev.edge] * x_[t];
        weights_[ev.edge] = Scalar{0};
        break;
      case EdgeEventKind::flipped:
        // was h -> t, contributing to s_t
        s_[t] -= weights_[ev.edge] * x_[h];
        s_[h] += weights_[ev.edge] * x_[t];
        ++flip_work_;
        break;
    }
  }

  OrientedGraph& graph_;
  Subscription subscription_ = 0;
  Scalar default_weight_;
  std::optional<Scalar> pending_;
  std::vector<Scalar> weights_;  // by edge id; stable across flips
  std::vector<Scalar> diagonal_;
  std::vector<Scalar> x_;
  std::vector<Scalar> s_;
  std::uint64_t flip_work_ = 0;
};

}  // namespace arbor
