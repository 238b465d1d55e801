#include "arbor/replay.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "arbor/applications.hpp"
#include "arbor/oracle.hpp"
#include "arbor/spectrum.hpp"

namespace arbor {

std::string_view to_string(CheckMode mode) {
  switch (mode) {
    case CheckMode::none: return "none";
    case CheckMode::fast: return "fast";
    case CheckMode::full: return "full";
  }
  return "?";
}

CheckMode check_mode_from_string(std::string_view name) {
  if (name == "none") return CheckMode::none;
  if (name == "fast") return CheckMode::fast;
  if (name == "full") return CheckMode::full;
  throw Error(ErrorCode::invalid_params, "unknown check mode '" + std::string(name) + "'");
}

std::string_view to_string(Variant v) { return v == Variant::naive ? "naive" : "spectrum"; }

Variant variant_from_string(std::string_view name) {
  if (name == "naive") return Variant::naive;
  if (name == "spectrum") return Variant::spectrum;
  throw Error(ErrorCode::invalid_params, "unknown algorithm '" + std::string(name) + "'");
}

int StatsReport::exit_code() const {
  if (error) return 2;
  return invariant_failures.empty() ? 0 : 1;
}

std::optional<std::size_t> StatsReport::first_failure() const {
  if (invariant_failures.empty()) return std::nullopt;
  return invariant_failures.front().op_index;
}

namespace {

constexpr std::size_t kMaxRecordedFailures = 100;

bool needs_applications(const Trace& trace, CheckMode check) {
  if (check == CheckMode::full) return true;
  return std::any_of(trace.ops.begin(), trace.ops.end(), [](const TraceOp& op) {
    return op.kind != TraceOpKind::insert && op.kind != TraceOpKind::erase;
  });
}

struct Apps {
  explicit Apps(OrientedGraph& g) : matching(g), adjacency(g), matvec(g) {}
  MaximalMatching matching;
  AdjacencyIndex adjacency;
  MatVecState<double> matvec;
};

class Replayer {
 public:
  Replayer(const Trace& trace, const ReplayConfig& config, StatsReport& report)
      : trace_(trace), config_(config), report_(report) {}

  void run() {
    report_.algo = std::string(to_string(config_.algo));
    report_.n = trace_.n;
    report_.alpha = config_.alpha;
    report_.beta = config_.beta;
    report_.check = config_.check;
    if (!(config_.beta > 1.0)) throw Error(ErrorCode::invalid_params, "beta must be > 1");
    if (config_.algo == Variant::spectrum) {
      if (!config_.alpha) throw Error(ErrorCode::invalid_params, "spectrum needs --alpha");
      const auto cfg = SpectrumConfig::make(*config_.alpha, config_.beta);
      gamma_ = cfg.gamma;
      report_.gamma = gamma_;
      graph_ = std::make_unique<SpectrumGraph>(trace_.n, cfg);
    } else {
      if (config_.alpha && *config_.alpha < 1) throw Error(ErrorCode::invalid_params, "alpha must be >= 1");
      graph_ = std::make_unique<OrientedGraph>(trace_.n);
    }
    graph_->inject_fault(config_.fault);
    oracle_sized_ = trace_.n <= oracle::oracle_limit();
    if (trace_.n >= 2 && config_.alpha) {
      report_.bound = oracle::theorem2_bound(*config_.alpha, config_.beta, trace_.n);
    }
    if (trace_.n >= 2 && (config_.alpha || oracle_sized_)) report_.bound_satisfied = true;
    if (needs_applications(trace_, config_.check)) apps_ = std::make_unique<Apps>(*graph_);

    report_.per_op.reserve(trace_.ops.size());
    for (std::size_t i = 0; i < trace_.ops.size(); ++i) step(i, trace_.ops[i]);
    finish_latency();
  }

 private:
  void step(std::size_t index, const TraceOp& op) {
    OpRecord rec;
    rec.op_index = index;
    rec.kind = op.kind;
    std::optional<UpdateStats> stats;
    const auto start = std::chrono::steady_clock::now();
    switch (op.kind) {
      case TraceOpKind::insert: stats = graph_->insert_edge(op.u, op.v); break;
      case TraceOpKind::erase: stats = graph_->delete_edge(op.u, op.v); break;
      case TraceOpKind::adjacent: rec.result = apps_->adjacency.adjacent(op.u, op.v) ? 1.0 : 0.0; break;
      case TraceOpKind::matching: rec.result = static_cast<double>(apps_->matching.size()); break;
      case TraceOpKind::weight: stats = apps_->matvec.set_weight(op.u, op.v, op.value); break;
      case TraceOpKind::set_x: apps_->matvec.set_x(op.u, op.value); break;
      case TraceOpKind::query: rec.result = apps_->matvec.query(op.u); break;
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    rec.elapsed_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count());
    rec.max_out_degree_after = graph_->max_out_degree();
    if (stats) {
      rec.flips = stats->flips;
      rec.recursion_depth = stats->recursion_depth;
      delta_run_ = std::max({delta_run_, stats->peak_out_degree, stats->max_out_degree_after});
      report_.max_flips = std::max(report_.max_flips, stats->flips);
      report_.total_flips += stats->flips;
      latencies_.push_back(rec.elapsed_ns);
    }
    report_.max_delta = std::max(report_.max_delta, rec.max_out_degree_after);
    if (oracle_sized_ && stats) rec.arboricity = oracle::arboricity_exact(oracle::StaticGraph::from(*graph_));

    check_bound(index, rec);
    if (stats && config_.check != CheckMode::none) fast_checks(index, *stats);
    if (config_.check == CheckMode::full) full_checks(index);
    report_.per_op.push_back(rec);
  }

  void check_bound(std::size_t index, const OpRecord& rec) {
    if (trace_.n < 2) return;
    std::optional<double> bound = report_.bound;
    if (!config_.alpha && rec.arboricity) {
      bound = oracle::theorem2_bound(*rec.arboricity, config_.beta, trace_.n);
      report_.bound = std::max(report_.bound.value_or(0.0), *bound);
    }
    if (!bound) return;
    if (static_cast<double>(rec.max_out_degree_after) > *bound + 1e-9) {
      report_.bound_satisfied = false;
      std::ostringstream msg;
      msg << "max out-degree " << rec.max_out_degree_after << " exceeds bound " << *bound;
      if (rec.arboricity && config_.alpha && *rec.arboricity > *config_.alpha) {
        msg << " (arboricity " << *rec.arboricity << " exceeds configured alpha)";
      }
      warn(index, msg.str());
    }
  }

  void fast_checks(std::size_t index, const UpdateStats& s) {
    if (s.flips + 1 != s.recursion_depth) fail(index, "flip count disagrees with recursion depth");
    if (s.flips > delta_run_ + 1) {
      fail(index, "flips " + std::to_string(s.flips) + " exceed delta_run + 1 = " + std::to_string(delta_run_ + 1));
    }
    if (s.chain_anomalies != 0) fail(index, "flip chain degrees are not a unit staircase");
    const std::uint32_t delta = graph_->max_out_degree();
    if (graph_->edge_count() > 0 && graph_->degree_count(delta) == 0) fail(index, "degree histogram has no vertex at the maximum");
    if (graph_->degree_count(delta + 1) != 0) fail(index, "degree histogram has a vertex above the maximum");
  }

  void full_checks(std::size_t index) {
    ValidationReport checks;
    if (config_.algo == Variant::naive) {
      checks = validate_invariant2(*graph_);
    } else {
      checks = validate_structure(*graph_);
      checks.merge(validate_lists(*graph_, gamma_));
      checks.merge(validate_invariant3(*graph_, gamma_));
    }
    if (apps_) {
      checks.merge(apps_->matching.check());
      checks.merge(apps_->adjacency.check());
      checks.merge(apps_->matvec.validate());
    }
    if (oracle_sized_ && graph_->max_out_degree() < oracle::min_max_outdegree(oracle::StaticGraph::from(*graph_))) {
      checks.failures.push_back("max out-degree below the optimum");
    }
    for (const auto& f : checks.failures) fail(index, f);
  }

  void fail(std::size_t index, std::string message) {
    if (report_.invariant_failures.size() < kMaxRecordedFailures) {
      report_.invariant_failures.push_back({index, std::move(message)});
    }
  }

  void warn(std::size_t index, std::string message) {
    if (report_.warnings.size() < kMaxRecordedFailures) report_.warnings.push_back({index, std::move(message)});
  }

  void finish_latency() {
    if (latencies_.empty()) return;
    std::sort(latencies_.begin(), latencies_.end());
    report_.p100_latency_ns = latencies_.back();
    const std::size_t rank = (latencies_.size() * 99 + 99) / 100;  // ceil(0.99 k)
    report_.p99_latency_ns = latencies_[std::max<std::size_t>(rank, 1) - 1];
  }

  const Trace& trace_;
  const ReplayConfig& config_;
  StatsReport& report_;
  std::unique_ptr<OrientedGraph> graph_;
  std::unique_ptr<Apps> apps_;
  std::uint32_t gamma_ = 0;
  bool oracle_sized_ = false;
  std::uint32_t delta_run_ = 0;
  std::vector<std::uint64_t> latencies_;
};

}  // namespace

StatsReport replay(const Trace& trace, const ReplayConfig& config) {
  StatsReport report;
  try {
    Replayer(trace, config, report).run();
  } catch (const Error& e) {
    const std::size_t at = report.per_op.size();
    report.error = at < trace.ops.size() ? "op " + std::to_string(at) + " (line " +
                                               std::to_string(trace.ops[at].line) + "): " + e.what()
                                         : std::string(e.what());
  }
  return report;
}

namespace {

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json failures_json(const std::vector<OpFailure>& list) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& f : list) out.push_back({{"op_index", f.op_index}, {"message", f.message}});
  return out;
}

}  // namespace

std::string to_json(const StatsReport& r, int indent) {
  nlohmann::ordered_json doc;
  doc["algo"] = r.algo;
  doc["n"] = r.n;
  doc["alpha"] = optional_json(r.alpha);
  doc["beta"] = r.beta;
  doc["gamma"] = optional_json(r.gamma);
  doc["check"] = std::string(to_string(r.check));
  auto ops = nlohmann::ordered_json::array();
  for (const auto& op : r.per_op) {
    nlohmann::ordered_json o;
    o["op_index"] = op.op_index;
    o["kind"] = std::string(to_string(op.kind));
    o["flips"] = op.flips;
    o["recursion_depth"] = op.recursion_depth;
    o["max_out_degree_after"] = op.max_out_degree_after;
    o["elapsed_ns"] = op.elapsed_ns;
    if (op.result) o["result"] = *op.result;
    if (op.arboricity) o["arboricity"] = *op.arboricity;
    ops.push_back(std::move(o));
  }
  doc["per_op"] = std::move(ops);
  doc["max_flips"] = r.max_flips;
  doc["total_flips"] = r.total_flips;
  doc["p100_latency_ns"] = r.p100_latency_ns;
  doc["p99_latency_ns"] = r.p99_latency_ns;
  doc["max_delta"] = r.max_delta;
  doc["bound"] = optional_json(r.bound);
  doc["bound_satisfied"] = optional_json(r.bound_satisfied);
  doc["invariant_failures"] = failures_json(r.invariant_failures);
  doc["warnings"] = failures_json(r.warnings);
  doc["error"] = optional_json(r.error);
  return doc.dump(indent);
}

std::string summary_line(const StatsReport& r) {
  std::ostringstream out;
  out << r.algo << ": ops=" << r.per_op.size() << " max_delta=" << r.max_delta << " max_flips=" << r.max_flips;
  if (r.bound) out << " bound=" << *r.bound << (r.bound_satisfied.value_or(true) ? "" : " (exceeded)");
  out << " failures=" << r.invariant_failures.size();
  if (const auto first = r.first_failure()) out << " first_failure=" << *first;
  if (r.error) out << " error=\"" << *r.error << '"';
  return out.str();
}

}  // namespace arbor
