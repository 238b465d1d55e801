#include "arbor/verify.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "arbor/oracle.hpp"
#include "arbor/replay.hpp"
#include "arbor/workload.hpp"

namespace arbor {

namespace {

constexpr std::size_t kExhaustiveLimit = 6;

Trace as_trace(const oracle::Witness& w) {
  Trace t{w.n, {}};
  for (const auto& u : w.trace) t.ops.push_back({u.insert ? TraceOpKind::insert : TraceOpKind::erase, u.u, u.v});
  return t;
}

void print_witness(std::ostream& out, const oracle::Witness& w) {
  std::istringstream lines(format_trace(as_trace(w)));
  for (std::string line; std::getline(lines, line);) out << "    " << line << '\n';
}

std::size_t exhaustive(const VerifyOptions& options, std::ostream& out) {
  oracle::SearchOptions search;
  search.max_n = options.max_n;
  search.max_ops = options.max_ops;
  search.memoize = options.max_n > 4;
  search.fault = options.fault;
  std::size_t problems = 0;
  for (const auto& r : oracle::adversarial_search(search)) {
    out << "exhaustive " << r.variant.name() << ": " << r.sequences << " sequences, best flips insert="
        << r.best_insert.flips << " delete=" << r.best_delete.flips << ", violations=" << r.violations.size() << '\n';
    for (const auto& v : r.violations) {
      out << "  counterexample: " << v.what << '\n';
      print_witness(out, v.trace);
    }
    problems += r.violations.size();
  }
  return problems;
}

// Random churn on a nearly complete small graph. Out-lists grow well past
// the block length, which the forest workloads rarely achieve at this size.
Trace dense_churn(std::size_t n, std::size_t ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t dense = n * (n - 1) * 3 / 8;
  std::set<std::pair<Vertex, Vertex>> present;
  Trace t{n, {}};
  while (t.ops.size() < ops) {
    Vertex a = pick(rng);
    Vertex b = pick(rng);
    if (a == b) continue;
    const auto key = std::minmax(a, b);
    const bool grow = coin(rng) < (present.size() < dense ? 0.7 : 0.3);
    if (grow && !present.contains(key)) {
      present.insert(key);
      t.ops.push_back({TraceOpKind::insert, a, b});
    } else if (!grow && present.contains(key)) {
      present.erase(key);
      t.ops.push_back({TraceOpKind::erase, a, b});
    }
  }
  return t;
}

struct Setup {
  Variant variant;
  double beta;
};

constexpr Setup kSetups[] = {{Variant::naive, 2.0}, {Variant::spectrum, 2.0}, {Variant::spectrum, 1.5}};

std::size_t report_problem(std::ostream& out, const std::string& label, const StatsReport& report) {
  out << "  counterexample: " << label << ' ' << summary_line(report) << '\n';
  if (!report.invariant_failures.empty()) {
    const auto& f = report.invariant_failures.front();
    out << "    op " << f.op_index << ": " << f.message << '\n';
  }
  if (!report.warnings.empty()) {
    const auto& w = report.warnings.front();
    out << "    op " << w.op_index << ": " << w.message << '\n';
  }
  return 1;
}

std::size_t randomized(const VerifyOptions& options, std::ostream& out) {
  std::size_t problems = 0;
  const auto n = std::min<std::size_t>(12, oracle::oracle_limit());
  for (std::size_t round = 0; round < options.rounds; ++round) {
    const std::uint64_t seed = options.seed + round;
    const auto alpha = static_cast<std::uint32_t>(1 + seed % 3);
    const auto kind = workload_kinds()[seed % workload_kinds().size()];
    const Trace trace = generate_workload({kind, std::max<std::size_t>(n, 2), alpha, 300, seed});
    const Trace dense = dense_churn(8, 4000, seed);
    for (const Setup& setup : kSetups) {
      ReplayConfig config;
      config.algo = setup.variant;
      config.alpha = alpha;
      config.beta = setup.beta;
      config.check = CheckMode::full;
      config.fault = options.fault;
      const StatsReport report = replay(trace, config);
      const std::string label = "seed " + std::to_string(seed) + " " + std::string(kind);
      if (report.exit_code() != 0 || report.bound_satisfied == false) problems += report_problem(out, label, report);

      // the dense graph exceeds alpha, so only the invariants are judged
      const StatsReport churn = replay(dense, config);
      if (churn.exit_code() != 0) problems += report_problem(out, "seed " + std::to_string(seed) + " dense-churn", churn);
    }

    const auto ops = oracle::random_heap_ops(20000, seed);
    const auto expected = oracle::reference_heap_replay(0, ops);
    const auto actual = oracle::neighbor_heap_replay(0, ops);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (expected[i] != actual[i]) {
        ++problems;
        out << "  counterexample: heap seed " << seed << " op " << i << ' ' << oracle::describe(ops[i])
            << ": expected " << oracle::describe(expected[i]) << ", got " << oracle::describe(actual[i]) << '\n';
        break;
      }
    }
  }
  out << "randomized: " << options.rounds << " rounds from seed " << options.seed << ", counterexamples=" << problems
      << '\n';
  return problems;
}

}  // namespace

std::size_t run_verify(const VerifyOptions& options, std::ostream& out) {
  if (options.max_n > kExhaustiveLimit) {
    throw Error(ErrorCode::invalid_params, "exhaustive mode supports n <= " + std::to_string(kExhaustiveLimit));
  }
  if (options.fault != Fault::none) out << "fault injected: " << to_string(options.fault) << '\n';
  std::size_t problems = exhaustive(options, out);
  problems += randomized(options, out);
  out << (problems == 0 ? "verify: ok" : "verify: FAILED") << '\n';
  return problems;
}

}  // namespace arbor
