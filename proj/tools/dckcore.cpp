#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace dckcore;

struct SimFlags {
  bool sync = false;
  bool async = false;
};

void add_job_flags(CLI::App& cmd, cli::JobSpec& spec, SimFlags& sim, std::string& strategy,
                   std::vector<Coreness>& thresholds) {
  cmd.add_option("-i,--input", spec.input, "Edge-list file")->required();
  cmd.add_option("--strategy", strategy, "Division strategy: exact | rough")
      ->check(CLI::IsMember({"exact", "rough"}));
  cmd.add_option("--thresholds", thresholds, "Comma-separated, strictly increasing")->delimiter(',');
  cmd.add_option("--parts", spec.parts, "Number of parts; thresholds from Deg_max*(i/P)^2")
      ->excludes("--thresholds");
  cmd.add_option("--plan", spec.plan_in, "Division plan JSON {strategy, thresholds}");
  cmd.add_option("--plan-out", spec.plan_out, "Write the division plan used");
  cmd.add_option("--partitions", spec.sim.partitions, "Simulated workers");
  cmd.add_option("--batch-size", spec.sim.batch_size, "Nodes per pull/push batch");
  auto* s = cmd.add_flag("--sync", sim.sync, "Pushes visible at sweep boundaries");
  auto* a = cmd.add_flag("--async", sim.async, "Pushes visible to later batches (default)");
  s->excludes(a);
  cmd.add_option("--max-sweeps", spec.sim.max_sweeps, "Sweep cap (0 = automatic)");
  cmd.add_option("--seed", spec.seed, "Recorded in the job; decomposition is deterministic");
  cmd.add_option("--node-count", spec.node_count,
                 "Ids 0..N-1 are nodes even without edges (default: <input>.nodes if present)");
  cmd.add_flag("--timings", spec.timings, "Include wall-clock phase timings in metrics JSON");
}

void finish_job(cli::JobSpec& spec, const SimFlags& sim, const std::string& strategy,
                const std::vector<Coreness>& thresholds) {
  spec.sim.mode = sim.sync ? SimMode::synchronous : SimMode::asynchronous;
  if (!strategy.empty()) spec.strategy = parse_strategy(strategy);
  spec.thresholds = thresholds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-conquer k-core decomposition"};
  app.require_subcommand(1);

  cli::JobSpec decompose_spec;
  SimFlags decompose_sim;
  std::string decompose_strategy;
  std::vector<Coreness> decompose_thresholds;
  std::string mode = "oracle";
  auto* decompose = app.add_subcommand("decompose", "Compute coreness of every node");
  decompose->add_option("--mode", mode, "oracle | baseline | divided")
      ->check(CLI::IsMember({"oracle", "baseline", "divided"}));
  decompose->add_option("-o,--output", decompose_spec.output, "Coreness TSV (default stdout)");
  decompose->add_option("--metrics-out", decompose_spec.metrics_out, "Metrics JSON");
  add_job_flags(*decompose, decompose_spec, decompose_sim, decompose_strategy, decompose_thresholds);

  cli::JobSpec compare_spec;
  SimFlags compare_sim;
  std::string compare_strategy;
  std::vector<Coreness> compare_thresholds;
  auto* compare = app.add_subcommand("compare", "Check oracle, baseline and divided agree");
  compare->add_option("-o,--output,--report-out", compare_spec.report_out,
                      "Comparison report JSON (default stdout)");
  add_job_flags(*compare, compare_spec, compare_sim, compare_strategy, compare_thresholds);

  cli::GenerateSpec gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic edge list");
  generate->add_option("model", gen.model, "ba | er")->required();
  generate->add_option("n", gen.first, "Node count")->required();
  generate->add_option("param", gen.second, "attach_m for ba, p for er")->required();
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("-o,--output", gen.output, "Edge-list file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  try {
    if (*decompose) {
      finish_job(decompose_spec, decompose_sim, decompose_strategy, decompose_thresholds);
      decompose_spec.mode = cli::parse_mode(mode);
      return cli::cmd_decompose(decompose_spec);
    }
    if (*compare) {
      finish_job(compare_spec, compare_sim, compare_strategy, compare_thresholds);
      return cli::cmd_compare(compare_spec);
    }
    return cli::cmd_generate(gen);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
}
