#include "arbor/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arbor {

std::string_view to_string(TraceOpKind kind) {
  switch (kind) {
    case TraceOpKind::insert: return "insert";
    case TraceOpKind::erase: return "delete";
    case TraceOpKind::adjacent: return "adjacent";
    case TraceOpKind::matching: return "matching";
    case TraceOpKind::weight: return "weight";
    case TraceOpKind::set_x: return "set_x";
    case TraceOpKind::query: return "query";
  }
  return "?";
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::malformed_trace, "line " + std::to_string(line) + ": " + why);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

std::uint64_t integer(std::string_view tok, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) malformed(line, "expected a nonnegative integer, got '" + std::string(tok) + "'");
  return value;
}

double number(std::string_view tok, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    malformed(line, "expected a number, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  bool header = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto tokens = split(raw);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    const std::string_view op = tokens[0];
    auto arity = [&](std::size_t k) {
      if (tokens.size() != k + 1) {
        malformed(line, "'" + std::string(op) + "' takes " + std::to_string(k) + " argument(s)");
      }
    };
    auto vertex = [&](std::size_t i) {
      const auto v = integer(tokens[i], line);
      if (v >= trace.n) malformed(line, "vertex " + std::to_string(v) + " out of range [0," + std::to_string(trace.n) + ")");
      return static_cast<Vertex>(v);
    };

    if (!header) {
      if (op != "n") malformed(line, "trace must start with 'n <count>'");
      arity(1);
      trace.n = integer(tokens[1], line);
      if (trace.n == 0 || trace.n >= kNoVertex) malformed(line, "vertex count must be positive");
      header = true;
      continue;
    }

    TraceOp t;
    t.line = line;
    if (op == "+" || op == "-" || op == "a") {
      arity(2);
      t.kind = op == "+" ? TraceOpKind::insert : op == "-" ? TraceOpKind::erase : TraceOpKind::adjacent;
      t.u = vertex(1);
      t.v = vertex(2);
    } else if (op == "m") {
      arity(0);
      t.kind = TraceOpKind::matching;
    } else if (op == "w") {
      arity(3);
      t.kind = TraceOpKind::weight;
      t.u = vertex(1);
      t.v = vertex(2);
      t.value = number(tokens[3], line);
    } else if (op == "x") {
      arity(2);
      t.kind = TraceOpKind::set_x;
      t.u = vertex(1);
      t.value = number(tokens[2], line);
    } else if (op == "y") {
      arity(1);
      t.kind = TraceOpKind::query;
      t.u = vertex(1);
    } else if (op == "n") {
      malformed(line, "duplicate header");
    } else {
      malformed(line, "unknown operation '" + std::string(op) + "'");
    }
    trace.ops.push_back(t);
  }
  if (!header) malformed(line, "missing 'n <count>' header");
  return trace;
}

Trace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::malformed_trace, "cannot open '" + path + "'");
  return parse_trace(in);
}

namespace {

std::string shortest(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out << "n " << trace.n << '\n';
  for (const auto& op : trace.ops) {
    switch (op.kind) {
      case TraceOpKind::insert: out << "+ " << op.u << ' ' << op.v; break;
      case TraceOpKind::erase: out << "- " << op.u << ' ' << op.v; break;
      case TraceOpKind::adjacent: out << "a " << op.u << ' ' << op.v; break;
      case TraceOpKind::matching: out << 'm'; break;
      case TraceOpKind::weight: out << "w " << op.u << ' ' << op.v << ' ' << shortest(op.value); break;
      case TraceOpKind::set_x: out << "x " << op.u << ' ' << shortest(op.value); break;
      case TraceOpKind::query: out << "y " << op.u; break;
    }
    out << '\n';
  }
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

}  // namespace arbor
