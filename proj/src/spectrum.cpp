#include "arbor/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace arbor {

SpectrumConfig SpectrumConfig::make(std::uint32_t alpha, double beta) {
  if (alpha < 1) throw Error(ErrorCode::invalid_params, "alpha must be >= 1");
  if (!(beta > 1.0) || !std::isfinite(beta)) throw Error(ErrorCode::invalid_params, "beta must be > 1");
  const double product = beta * static_cast<double>(alpha);
  // absorb representation error so that e.g. 1.5 * 2 stays 3
  const double gamma = std::ceil(product - 1e-9 * product);
  if (gamma > 1e9) throw Error(ErrorCode::invalid_params, "beta * alpha too large");
  return SpectrumConfig{alpha, beta, std::max<std::uint32_t>(2, static_cast<std::uint32_t>(gamma))};
}

SpectrumGraph::SpectrumGraph(std::size_t n, std::uint32_t alpha, double beta)
    : SpectrumGraph(n, SpectrumConfig::make(alpha, beta)) {}

SpectrumGraph::SpectrumGraph(std::size_t n, const SpectrumConfig& config)
    : OrientedGraph(n, Variant::spectrum, SpectrumConfig::make(config.alpha, config.beta).gamma),
      config_(SpectrumConfig::make(config.alpha, config.beta)) {}

SpectrumGraph SpectrumGraph::from_arcs(std::size_t n, const SpectrumConfig& config, std::span<const Arc> arcs) {
  SpectrumGraph g(n, config);
  g.assign_arcs(arcs);
  return g;
}

namespace {

// Smallest i with dg(head) >= dg(tail) - i, i.e. the first block the edge may occupy.
std::uint32_t required_block(std::uint32_t tail_degree, std::uint32_t head_degree) {
  return tail_degree > head_degree ? tail_degree - head_degree : 0;
}

}  // namespace

ValidationReport validate_lists(const OrientedGraph& g, std::uint32_t gamma) {
  ValidationReport report;
  if (gamma < 2) {
    report.failures.push_back("gamma must be >= 2");
    return report;
  }
  for (Vertex w = 0; w < g.vertex_count(); ++w) {
    const std::uint32_t dw = g.out_degree(w);
    std::uint32_t position = 0;
    g.for_each_out(w, [&](EdgeId, Vertex x) {
      const std::uint32_t block = position / gamma + 1;
      if (required_block(dw, g.out_degree(x)) > block) {
        report.failures.push_back("list of " + std::to_string(w) + ": position " + std::to_string(position + 1) +
                                  " (edge ->" + std::to_string(x) + ") is not " + std::to_string(block) +
                                  "-valid");
      }
      ++position;
    });
  }
  return report;
}

ValidationReport validate_invariant3(const OrientedGraph& g, std::uint32_t gamma) {
  ValidationReport report;
  if (gamma < 2) {
    report.failures.push_back("gamma must be >= 2");
    return report;
  }
  std::vector<std::uint32_t> targets;
  for (Vertex w = 0; w < g.vertex_count(); ++w) {
    const std::uint32_t dw = g.out_degree(w);
    targets.clear();
    g.for_each_out(w, [&](EdgeId, Vertex x) { targets.push_back(g.out_degree(x)); });
    std::sort(targets.begin(), targets.end(), std::greater<>());
    for (std::size_t p = 0; p < targets.size(); ++p) {
      const auto block = static_cast<std::uint32_t>(p / gamma + 1);
      if (required_block(dw, targets[p]) > block) {
        report.failures.push_back("vertex " + std::to_string(w) + " is not spectrum-valid (set " +
                                  std::to_string(block) + " needs a target of out-degree >= " +
                                  std::to_string(dw - block) + ")");
        break;
      }
    }
  }
  return report;
}

std::uint32_t valid_out_edges(const OrientedGraph& g, Vertex w) {
  const std::uint32_t dw = g.out_degree(w);
  std::uint32_t valid = 0;
  g.for_each_out(w, [&](EdgeId, Vertex x) {
    if (dw <= g.out_degree(x) + 1) ++valid;
  });
  return valid;
}

ValidationReport validate_invariant1(const OrientedGraph& g, std::uint32_t gamma) {
  ValidationReport report;
  for (Vertex w = 0; w < g.vertex_count(); ++w) {
    const std::uint32_t need = std::min(g.out_degree(w), gamma);
    const std::uint32_t have = valid_out_edges(g, w);
    if (have < need) {
      report.failures.push_back("vertex " + std::to_string(w) + " has " + std::to_string(have) +
                                " valid out-edges, needs " + std::to_string(need));
    }
  }
  return report;
}

}  // namespace arbor
