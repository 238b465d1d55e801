#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/oriented_graph.hpp"
#include "arbor/trace.hpp"

namespace arbor {

enum class CheckMode { none, fast, full };

std::string_view to_string(CheckMode mode);
CheckMode check_mode_from_string(std::string_view name);
Variant variant_from_string(std::string_view name);
std::string_view to_string(Variant v);

struct ReplayConfig {
  Variant algo = Variant::naive;
  /// Required for spectrum. When absent, the reported bound uses the exact
  /// arboricity of every step if n is within the oracle limit.
  std::optional<std::uint32_t> alpha;
  double beta = 2.0;
  CheckMode check = CheckMode::fast;
  Fault fault = Fault::none;
};

struct OpRecord {
  std::size_t op_index = 0;
  TraceOpKind kind = TraceOpKind::insert;
  std::uint32_t flips = 0;
  std::uint32_t recursion_depth = 0;
  std::uint32_t max_out_degree_after = 0;
  std::uint64_t elapsed_ns = 0;
  std::optional<double> result;
  std::optional<std::uint32_t> arboricity;
};

struct OpFailure {
  std::size_t op_index = 0;
  std::string message;
};

struct StatsReport {
  std::string algo;
  std::size_t n = 0;
  std::optional<std::uint32_t> alpha;
  double beta = 2.0;
  std::optional<std::uint32_t> gamma;
  CheckMode check = CheckMode::fast;

  std::vector<OpRecord> per_op;
  std::uint32_t max_flips = 0;
  std::uint64_t total_flips = 0;
  std::uint64_t p100_latency_ns = 0;
  std::uint64_t p99_latency_ns = 0;
  std::uint32_t max_delta = 0;
  std::optional<double> bound;
  std::optional<bool> bound_satisfied;
  std::vector<OpFailure> invariant_failures;
  std::vector<OpFailure> warnings;
  /// Contract error that stopped the replay, e.g. deleting a missing edge.
  std::optional<std::string> error;

  /// 0 clean, 1 invariant failure, 2 malformed trace or contract error.
  int exit_code() const;
  std::optional<std::size_t> first_failure() const;
};

StatsReport replay(const Trace& trace, const ReplayConfig& config);

std::string to_json(const StatsReport& report, int indent = 2);
/// One line for the terminal.
std::string summary_line(const StatsReport& report);

}  // namespace arbor
