#pragma once

#include <cstdint>
#include <span>

#include "arbor/oriented_graph.hpp"

namespace arbor {

/// Parameters of the block-list variant. gamma = ceil(beta * alpha) is the
/// block length of every out-edge list.
struct SpectrumConfig {
  std::uint32_t alpha = 1;
  double beta = 2.0;
  std::uint32_t gamma = 2;

  /// Throws INVALID_PARAMS unless alpha >= 1 and beta > 1.
  static SpectrumConfig make(std::uint32_t alpha, double beta);
};

/// Orientation maintained through block-valid out-edge lists.
///
/// Position p (1-based) of the out-list of w lies in block ceil(p / gamma).
/// After every public update each edge w->x in block i is i-valid, meaning
/// dg(x) >= dg(w) - i. Insertion only inspects the last gamma-1 list entries,
/// so it costs O(gamma * Delta) instead of O(Delta^2).
///
/// The configured alpha only determines gamma. If the graph's arboricity
/// exceeds it, the lists stay valid; only the out-degree bound may weaken.
class SpectrumGraph : public OrientedGraph {
 public:
  SpectrumGraph(std::size_t n, std::uint32_t alpha, double beta);
  explicit SpectrumGraph(std::size_t n, const SpectrumConfig& config);

  static SpectrumGraph from_arcs(std::size_t n, const SpectrumConfig& config, std::span<const Arc> arcs);

  const SpectrumConfig& config() const noexcept { return config_; }
  std::uint32_t gamma() const noexcept { return gamma_; }

 private:
  SpectrumConfig config_;
};

/// Checks that every list position satisfies its block's validity bound.
ValidationReport validate_lists(const OrientedGraph& g, std::uint32_t gamma);

/// Checks that each vertex admits some partition of its out-edges into
/// gamma-sized sets with set i entirely i-valid, regardless of list order.
/// Sorting targets by out-degree, largest first, and filling blocks in order
/// is optimal, so the check is exact.
ValidationReport validate_invariant3(const OrientedGraph& g, std::uint32_t gamma);

/// Number of valid (1-valid) out-edges of w.
std::uint32_t valid_out_edges(const OrientedGraph& g, Vertex w);

/// Each vertex has at least min(dg(w), gamma) valid out-edges.
ValidationReport validate_invariant1(const OrientedGraph& g, std::uint32_t gamma);

}  // namespace arbor
