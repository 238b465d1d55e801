// arbor: replay traces, generate workloads, run the verification sweep.
//
// ARBOR_FAULT=<name> injects one of the mutation-test defects into every
// structure the command builds.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "arbor/replay.hpp"
#include "arbor/trace.hpp"
#include "arbor/verify.hpp"
#include "arbor/workload.hpp"

namespace {

arbor::Fault env_fault() {
  const char* name = std::getenv("ARBOR_FAULT");
  return arbor::fault_from_string(name ? name : "");
}

int cmd_run(const std::string& trace_path, const std::string& algo, std::optional<std::uint32_t> alpha, double beta,
            const std::string& check, const std::string& stats_path) {
  arbor::Trace trace;
  try {
    trace = arbor::read_trace_file(trace_path);
  } catch (const arbor::Error& e) {
    std::cerr << "arbor run: " << e.what() << '\n';
    return 2;
  }
  arbor::ReplayConfig config;
  config.algo = arbor::variant_from_string(algo);
  config.alpha = alpha;
  config.beta = beta;
  config.check = arbor::check_mode_from_string(check);
  config.fault = env_fault();

  const arbor::StatsReport report = arbor::replay(trace, config);
  if (!stats_path.empty()) {
    std::ofstream out(stats_path);
    if (!out) {
      std::cerr << "arbor run: cannot write '" << stats_path << "'\n";
      return 2;
    }
    out << arbor::to_json(report) << '\n';
  }
  std::cout << arbor::summary_line(report) << '\n';
  if (const auto first = report.first_failure()) {
    std::cerr << "arbor run: invariant failure at op " << *first << ": " << report.invariant_failures.front().message
              << '\n';
  }
  if (report.error) std::cerr << "arbor run: " << *report.error << '\n';
  return report.exit_code();
}

int cmd_gen(const std::string& kind, std::size_t n, std::uint32_t alpha, std::size_t ops, std::uint64_t seed,
            const std::string& out_path) {
  const arbor::Trace trace = arbor::generate_workload({kind, n, alpha, ops, seed});
  if (out_path.empty() || out_path == "-") {
    arbor::write_trace(std::cout, trace);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "arbor gen: cannot write '" << out_path << "'\n";
    return 2;
  }
  arbor::write_trace(out, trace);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic low out-degree edge orientation"};
  app.require_subcommand(1);

  std::string trace_path;
  std::string algo = "naive";
  std::optional<std::uint32_t> alpha;
  double beta = 2.0;
  std::string check = "fast";
  std::string stats_path;
  std::string kind = "forest-union";
  std::size_t n = 16;
  std::size_t ops = 100;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Replay a trace and report statistics");
  run->add_option("--trace", trace_path, "Trace file")->required();
  run->add_option("--algo", algo, "naive or spectrum")->check(CLI::IsMember({"naive", "spectrum"}));
  run->add_option("--alpha", alpha, "Arboricity parameter (required for spectrum)")->check(CLI::PositiveNumber);
  run->add_option("--beta", beta, "Bound parameter, > 1");
  run->add_option("--check", check, "none, fast or full")->check(CLI::IsMember({"none", "fast", "full"}));
  run->add_option("--stats", stats_path, "Write the statistics document here");

  std::uint32_t gen_alpha = 1;
  auto* gen = app.add_subcommand("gen", "Generate a workload trace");
  gen->add_option("--kind", kind, "forest-union, sliding-window or star-churn")
      ->check(CLI::IsMember({"forest-union", "sliding-window", "star-churn"}));
  gen->add_option("--n", n, "Vertex count");
  gen->add_option("--alpha", gen_alpha, "Arboricity cap");
  gen->add_option("--ops", ops, "Number of updates");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--trace", trace_path, "Output file (default stdout)");

  std::size_t verify_n = 4;
  std::size_t verify_ops = 8;
  auto* verify = app.add_subcommand("verify", "Exhaustive and randomized verification");
  verify->add_option("--n", verify_n, "Largest vertex count for the exhaustive search (<= 6)");
  verify->add_option("--ops", verify_ops, "Longest update sequence for the exhaustive search");
  verify->add_option("--seed", seed, "First seed of the randomized rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(trace_path, algo, alpha, beta, check, stats_path);
    if (*gen) return cmd_gen(kind, n, gen_alpha, ops, seed, trace_path);
    arbor::VerifyOptions options;
    options.max_n = verify_n;
    options.max_ops = verify_ops;
    options.seed = seed;
    options.fault = env_fault();
    return arbor::run_verify(options, std::cout) == 0 ? 0 : 1;
  } catch (const arbor::Error& e) {
    std::cerr << "arbor: " << e.what() << '\n';
    return 2;
  }
}
