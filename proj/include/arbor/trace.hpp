#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/common.hpp"

namespace arbor {

enum class TraceOpKind { insert, erase, adjacent, matching, weight, set_x, query };

std::string_view to_string(TraceOpKind kind);

/// One trace line. Unused fields stay zero.
struct TraceOp {
  TraceOpKind kind = TraceOpKind::insert;
  Vertex u = 0;
  Vertex v = 0;
  double value = 0.0;
  std::size_t line = 0;  // 1-based source line, 0 when built in memory

  friend bool operator==(const TraceOp& a, const TraceOp& b) {
    return a.kind == b.kind && a.u == b.u && a.v == b.v && a.value == b.value;
  }
};

/// Text format, one operation per line:
///
///     n <count>
///     + u v     insert edge
///     - u v     delete edge
///     a u v     adjacency query
///     m         matching size
///     w i j val matrix entry (0 deletes, i == j sets the diagonal)
///     x j val   vector entry
///     y i       coordinate of A x
///     # ...     comment
///
/// Parsing checks syntax and vertex ranges only; whether a `+` or `-` makes
/// sense for the current graph is decided on replay.
struct Trace {
  std::size_t n = 0;
  std::vector<TraceOp> ops;
};

/// Throws MALFORMED_TRACE with the offending line number.
Trace parse_trace(std::istream& in);
Trace parse_trace(std::string_view text);
Trace read_trace_file(const std::string& path);

void write_trace(std::ostream& out, const Trace& trace);
std::string format_trace(const Trace& trace);

}  // namespace arbor
