#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace arbor {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

enum class ErrorCode {
  decrement_below_zero,
  stale_handle,
  key_too_high,
  duplicate_id,
  center_below_zero,
  invalid_size,
  self_loop,
  duplicate_edge,
  unknown_vertex,
  no_such_edge,
  invalid_params,
  too_large,
  malformed_trace,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::decrement_below_zero: return "DECREMENT_BELOW_ZERO";
    case ErrorCode::stale_handle: return "STALE_HANDLE";
    case ErrorCode::key_too_high: return "KEY_TOO_HIGH";
    case ErrorCode::duplicate_id: return "DUPLICATE_ID";
    case ErrorCode::center_below_zero: return "CENTER_BELOW_ZERO";
    case ErrorCode::invalid_size: return "INVALID_SIZE";
    case ErrorCode::self_loop: return "SELF_LOOP";
    case ErrorCode::duplicate_edge: return "DUPLICATE_EDGE";
    case ErrorCode::unknown_vertex: return "UNKNOWN_VERTEX";
    case ErrorCode::no_such_edge: return "NO_SUCH_EDGE";
    case ErrorCode::invalid_params: return "INVALID_PARAMS";
    case ErrorCode::too_large: return "TOO_LARGE";
    case ErrorCode::malformed_trace: return "MALFORMED_TRACE";
  }
  return "UNKNOWN";
}

/// Every contract violation in the library surfaces as an Error carrying a
/// machine-checkable code; the message is for humans only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A directed edge tail -> head.
struct Arc {
  Vertex tail = kNoVertex;
  Vertex head = kNoVertex;

  friend bool operator==(const Arc&, const Arc&) = default;
};

inline std::uint64_t pair_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace arbor
