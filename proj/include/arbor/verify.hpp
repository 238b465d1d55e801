#pragma once

#include <cstdint>
#include <iosfwd>

#include "arbor/oriented_graph.hpp"

namespace arbor {

struct VerifyOptions {
  std::size_t max_n = 4;
  std::size_t max_ops = 8;
  /// Randomized rounds use seeds seed, seed+1, ..., seed+rounds-1.
  std::uint64_t seed = 0;
  std::size_t rounds = 8;
  Fault fault = Fault::none;
};

/// Exhaustive search over every short update sequence plus seeded
/// differential rounds (replays checked against the oracles and the heap
/// against its reference). Writes a report and any witness traces to `out`.
/// Returns the number of counterexamples found.
std::size_t run_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace arbor
