#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "arbor/trace.hpp"

namespace arbor {

/// Deterministic update sequences whose arboricity never exceeds `alpha`.
///
/// forest-union     alpha edge-disjoint forests under random link/cut churn
/// sliding-window   random forest links; the oldest edge leaves once the
///                  window is full
/// star-churn       hubs 0..alpha-1 each gain every leaf in turn, then lose
///                  them again; the first round uses natural leaf order
struct WorkloadParams {
  std::string_view kind = "forest-union";
  std::size_t n = 16;
  std::uint32_t alpha = 1;
  std::size_t ops = 100;
  std::uint64_t seed = 0;
};

/// Throws INVALID_PARAMS for an unknown kind, n < 2, alpha < 1 or ops < 1.
Trace generate_workload(const WorkloadParams& params);

std::span<const std::string_view> workload_kinds();

}  // namespace arbor
