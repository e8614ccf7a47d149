// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "dckcore/dckcore.hpp"
#include "test_support.hpp"

namespace {

using namespace dckcore;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o, double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, title, o, std::chrono::duration<double>(Clock::now() - start).count());
}

// ---------------------------------------------------------------------------
// Test corpus: edge cases, Erdos-Renyi from sparse to dense, Barabasi-Albert.

struct NamedGraph {
  std::string name;
  Graph graph;
};

std::vector<NamedGraph> build_corpus() {
  using namespace dckcore::testing;
  std::vector<NamedGraph> out;
  out.push_back({"empty", Graph{}});
  out.push_back({"single", Graph::from_edges(1, std::vector<Edge>{})});
  out.push_back({"isolated10", Graph::from_edges(10, std::vector<Edge>{})});
  out.push_back({"star5", star(5)});
  out.push_back({"star200", star(200)});
  out.push_back({"path2", path(2)});
  out.push_back({"path50", path(50)});
  out.push_back({"clique4", complete(4)});
  out.push_back({"clique30", complete(30)});
  out.push_back({"cliques", disjoint_cliques({1, 2, 3, 5, 8, 13})});
  out.push_back({"triangle_pendant", triangle_pendant()});
  out.push_back({"k4_pendant", k4_pendant()});
  out.push_back({"layered", layered()});

  std::mt19937_64 rng(20240601);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * detail::unit_double(rng));
  };
  for (int i = 0; i < 100; ++i) {
    const auto n = static_cast<NodeId>(std::clamp(std::lround(log_uniform(1, 2000)), 1L, 2000L));
    double p;
    if (i % 10 == 0 && n <= 200) {
      p = std::vector<double>{0.5, 0.8, 1.0}[static_cast<std::size_t>(i / 10) % 3];
    } else {
      const double avg_degree = log_uniform(0.2, std::max(0.3, std::min<double>(n - 1, 60)));
      p = std::min(1.0, avg_degree / std::max<double>(1, n - 1));
    }
    out.push_back({"er" + std::to_string(i), generate_synthetic(ErdosRenyi{n, p}, 1000 + i)});
  }
  const NodeId attach[] = {1, 2, 3, 5};
  for (int i = 0; i < 100; ++i) {
    const NodeId m = attach[i % 4];
    auto n = static_cast<NodeId>(std::clamp(std::lround(log_uniform(10, 5000)), 10L, 5000L));
    n = std::max<NodeId>(n, m + 1);
    out.push_back({"ba" + std::to_string(i), generate_synthetic(PowerlawBA{n, m}, 2000 + i)});
  }
  return out;
}

DivisionPlan plan_for(const Graph& g, Strategy strategy, std::size_t parts) {
  try {
    return {strategy, plan_thresholds(g.max_degree(), parts)};
  } catch (const Error&) {
    // Too few distinct heuristic thresholds (or no edges): fall back to 1..P-1.
    std::vector<Coreness> t(parts - 1);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Coreness>(i + 1);
    return {strategy, t};
  }
}

SimConfig sim(std::size_t partitions, SimMode mode, std::size_t batch = 32) {
  SimConfig c;
  c.partitions = partitions;
  c.mode = mode;
  c.batch_size = batch;
  return c;
}

// Shared by criteria 1, 2 and 4.
struct CorpusRun {
  std::size_t graphs = 0;
  std::size_t runs = 0;
  std::size_t coreness_mismatches = 0;
  std::size_t corollary_checks = 0;
  std::size_t corollary_violations = 0;
  std::size_t trace_checks = 0;
  std::size_t monotone_violations = 0;
  std::size_t bound_violations = 0;
  std::string first_problem;
};

CorpusRun run_corpus(const std::vector<NamedGraph>& corpus) {
  CorpusRun acc;
  for (const auto& [name, g] : corpus) {
    ++acc.graphs;
    const CorenessMap truth = peel_coreness(g);
    const ExternalInfo zero = ExternalInfo::zeros(g.node_count());
    auto check = [&](const CorenessMap& got, const std::string& what) {
      ++acc.runs;
      if (got != truth) {
        ++acc.coreness_mismatches;
        if (acc.first_problem.empty()) acc.first_problem = name + "/" + what;
      }
    };
    // Checks one run's per-sweep estimates for descent and the upper bound.
    auto tracer = [&](std::vector<Coreness>& prev) {
      prev.clear();
      return [&](std::uint64_t, std::span<const Coreness> est) {
        ++acc.trace_checks;
        for (NodeId v = 0; v < g.node_count(); ++v) {
          if (est[v] < truth[v]) ++acc.bound_violations;
          if (!prev.empty() && est[v] > prev[v]) ++acc.monotone_violations;
        }
        prev.assign(est.begin(), est.end());
      };
    };

    std::vector<Coreness> prev;
    SequentialOptions seq_opts;
    seq_opts.observer = tracer(prev);
    check(decompose_sequential(g, zero, seq_opts).coreness, "sequential");

    for (std::size_t p : {1, 2, 4, 8}) {
      check(run_distributed(g, zero, sim(p, SimMode::synchronous), tracer(prev)).coreness,
            "sync/" + std::to_string(p));
      check(run_distributed(g, zero, sim(p, SimMode::asynchronous)).coreness, "async/" + std::to_string(p));
    }

    for (auto strategy : {Strategy::exact, Strategy::rough}) {
      for (std::size_t parts : {2, 3, 4}) {
        const DivisionPlan plan = plan_for(g, strategy, parts);
        const auto engine = (parts % 2 == 0) ? distributed_engine(sim(4, SimMode::asynchronous))
                                             : sequential_engine();
        const DividedResult r = run_divided(g, plan, engine);
        check(r.coreness, to_string(strategy) + "/P" + std::to_string(parts));
        for (const PartResult& part : r.parts) {
          if (!part.upper_threshold) continue;
          for (std::size_t i = 0; i < part.finalized.size(); ++i) {
            ++acc.corollary_checks;
            const Coreness e = part.ext[i];
            if (e > truth[part.finalized[i].node] || e >= *part.upper_threshold) {
              ++acc.corollary_violations;
            }
          }
        }
      }
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------

Outcome superset_property(const std::vector<NamedGraph>& corpus) {
  std::size_t checks = 0, violations = 0;
  for (const auto& [name, g] : corpus) {
    for (Coreness k = 1; k <= g.max_degree(); ++k) {
      const SubgraphView exact = extract_kcore(g, k);
      const RoughDivision rough = rough_divide(g, k);
      ++checks;
      const auto& big = rough.rough_upper;
      if (!std::includes(big.members.begin(), big.members.end(), exact.members.begin(), exact.members.end())) {
        ++violations;
        continue;
      }
      for (auto [u, v] : exact.graph.edges()) {
        const auto a = big.to_sub(exact.to_parent(u));
        const auto b = big.to_sub(exact.to_parent(v));
        const auto nb = big.graph.neighbors(*a);
        if (!std::binary_search(nb.begin(), nb.end(), *b)) ++violations;
      }
      if (exact.empty()) break;  // every larger k is empty too
    }
  }
  return {violations == 0, std::to_string(checks) + " (graph, k) pairs, " + std::to_string(violations) +
                               " violations"};
}

Outcome communication_reduction(const Graph& g) {
  const DivisionPlan plan{Strategy::rough, plan_thresholds(g.max_degree(), 2)};
  SimConfig config;
  config.partitions = 8;
  config.batch_size = 1024;
  config.mode = SimMode::asynchronous;
  const auto baseline = run_distributed(g, ExternalInfo::zeros(g.node_count()), config);
  const auto divided = run_divided(g, plan, distributed_engine(config));
  std::vector<RunMetrics> parts;
  for (const auto& p : divided.parts) parts.push_back(p.metrics);
  const ComparisonReport rep = compare_runs(baseline.metrics, parts);
  const bool exact = divided.coreness == baseline.coreness;
  std::ostringstream d;
  d << "Deg_max=" << g.max_degree() << " k=" << plan.thresholds[0] << " k_max=" << baseline.coreness.k_max()
    << " finalized_top=" << divided.parts[0].finalized.size() << " baseline=" << rep.baseline_total
    << " divided=" << rep.divided_total << " (parts";
  for (auto t : rep.part_totals) d << ' ' << t;
  d << ") ratio=" << (rep.ratio ? *rep.ratio : -1.0) << " consistent=" << (exact ? "yes" : "no");
  return {exact && rep.divided_total < rep.baseline_total, d.str()};
}

Outcome divide_cost(const Graph& g) {
  const Coreness k = plan_thresholds(g.max_degree(), 2)[0];
  double best_rough = 1e30, best_exact = 1e30;
  ExtractionStats rough_stats, exact_stats;
  for (int rep = 0; rep < 7; ++rep) {
    auto t0 = Clock::now();
    const RoughDivision rough = rough_divide(g, k);
    auto t1 = Clock::now();
    const SubgraphView exact = extract_kcore(g, k, &exact_stats);
    auto t2 = Clock::now();
    rough_stats = rough.stats;
    best_rough = std::min(best_rough, std::chrono::duration<double>(t1 - t0).count());
    best_exact = std::min(best_exact, std::chrono::duration<double>(t2 - t1).count());
    if (rough.rough_upper.size() < exact.size()) return {false, "rough part smaller than k-core"};
  }
  const bool structural = rough_stats.node_passes == 1 && rough_stats.peel_rounds == 0 &&
                          exact_stats.peel_rounds >= 1;
  std::ostringstream d;
  d << "k=" << k << " rough: passes=" << rough_stats.node_passes << " rounds=" << rough_stats.peel_rounds
    << " " << best_rough * 1e3 << "ms; exact: rounds=" << exact_stats.peel_rounds << " " << best_exact * 1e3
    << "ms (best of 7)";
  return {structural && best_rough <= best_exact, d.str()};
}

Outcome threshold_heuristic() {
  const auto two = plan_thresholds(400, 2);
  const auto four = plan_thresholds(400, 4);
  const bool ok = two == std::vector<Coreness>{100} && four == std::vector<Coreness>{25, 100, 225};
  std::ostringstream d;
  d << "P=2 -> [" << two[0] << "], P=4 -> [" << four[0] << "," << four[1] << "," << four[2] << "]";
  return {ok, d.str()};
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dckcore_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string input = (dir / "g.el").string();
  if (cli::cmd_generate({"ba", "20000", "4", 42, input}) != cli::kOk) return {false, "generate failed"};
  const std::string gen_first = read(input);
  if (cli::cmd_generate({"ba", "20000", "4", 42, input}) != cli::kOk || read(input) != gen_first) {
    return {false, "generate not reproducible"};
  }

  struct Job {
    const char* name;
    cli::Mode mode;
    Strategy strategy;
    std::size_t parts;
    SimMode sim;
  };
  const Job jobs[] = {
      {"oracle", cli::Mode::oracle, Strategy::rough, 0, SimMode::synchronous},
      {"baseline-sync", cli::Mode::baseline, Strategy::rough, 0, SimMode::synchronous},
      {"baseline-async", cli::Mode::baseline, Strategy::rough, 0, SimMode::asynchronous},
      {"exact3-sync", cli::Mode::divided, Strategy::exact, 3, SimMode::synchronous},
      {"rough2-async", cli::Mode::divided, Strategy::rough, 2, SimMode::asynchronous},
      {"rough4-sync", cli::Mode::divided, Strategy::rough, 4, SimMode::synchronous},
  };
  std::size_t compared = 0;
  for (const Job& job : jobs) {
    std::string out[2], metrics[2];
    for (int run = 0; run < 2; ++run) {
      cli::JobSpec spec;
      spec.input = input;
      spec.mode = job.mode;
      spec.strategy = job.strategy;
      if (job.parts) spec.parts = job.parts;
      spec.sim.partitions = 4;
      spec.sim.batch_size = 500;
      spec.sim.mode = job.sim;
      spec.seed = 7;
      spec.output = (dir / (std::string(job.name) + std::to_string(run) + ".tsv")).string();
      spec.metrics_out = (dir / (std::string(job.name) + std::to_string(run) + ".json")).string();
      if (cli::cmd_decompose(spec) != cli::kOk) return {false, std::string(job.name) + " failed"};
      out[run] = read(spec.output);
      metrics[run] = read(spec.metrics_out);
    }
    if (out[0] != out[1]) return {false, std::string(job.name) + ": coreness output differs"};
    ++compared;
    if (job.sim == SimMode::synchronous) {
      if (metrics[0] != metrics[1]) return {false, std::string(job.name) + ": metrics JSON differs"};
      ++compared;
    }
  }
  fs::remove_all(dir);
  return {true, std::to_string(compared) + " output pairs byte-identical over " +
                    std::to_string(std::size(jobs)) + " jobs"};
}

Outcome h_operator_reduction() {
  std::mt19937_64 rng(99);
  std::size_t trials = 0, violations = 0;
  for (; trials < 20000; ++trials) {
    std::vector<Coreness> c(rng() % 64);
    const Coreness hi = 1 + static_cast<Coreness>(rng() % 80);
    for (auto& x : c) x = static_cast<Coreness>(rng() % hi);
    if (h_operator_ext(c, 0) != h_operator(c)) ++violations;
    if (h_operator(c) != testing::literal_estimate(c, 0)) ++violations;
    const Coreness e = static_cast<Coreness>(rng() % 40);
    const Coreness he = h_operator_ext(c, e);
    if (he < e) ++violations;
    if (he != testing::literal_estimate(c, e)) ++violations;
    const bool all_below = std::all_of(c.begin(), c.end(), [&](Coreness x) { return x < e + 1; });
    if (all_below && he != e) ++violations;
  }
  return {violations == 0, std::to_string(trials) + " random multisets, " + std::to_string(violations) +
                               " violations"};
}

}  // namespace

int main() {
  const auto corpus = build_corpus();
  CorpusRun corpus_run;
  run(1, "oracle equivalence of all engines", [&] {
    corpus_run = run_corpus(corpus);
    const auto& a = corpus_run;
    std::ostringstream d;
    d << a.graphs << " graphs, " << a.runs << " runs, " << a.coreness_mismatches << " mismatches";
    if (!a.first_problem.empty()) d << " (first: " << a.first_problem << ")";
    return Outcome{a.graphs >= 200 && a.coreness_mismatches == 0, d.str()};
  });
  run(2, "external info bounded by coreness and threshold", [&] {
    const auto& a = corpus_run;
    return Outcome{a.corollary_checks > 0 && a.corollary_violations == 0,
                   std::to_string(a.corollary_checks) + " lower-part nodes, " +
                       std::to_string(a.corollary_violations) + " violations"};
  });
  run(3, "rough part is a superset of the k-core", [&] { return superset_property(corpus); });
  run(4, "monotone descent and upper bound of estimates", [&] {
    const auto& a = corpus_run;
    return Outcome{a.trace_checks > 0 && a.monotone_violations == 0 && a.bound_violations == 0,
                   std::to_string(a.trace_checks) + " sweep snapshots, " +
                       std::to_string(a.monotone_violations) + " increases, " +
                       std::to_string(a.bound_violations) + " below coreness"};
  });

  const Graph big = generate_synthetic(PowerlawBA{100000, 5}, 42);
  run(5, "divided communication below baseline (BA n=100000, m=5, P=2 rough)",
      [&] { return communication_reduction(big); });
  run(6, "rough extraction: one node pass and no slower than exact", [&] { return divide_cost(big); });
  run(7, "threshold heuristic values", [] { return threshold_heuristic(); });
  run(8, "CLI reruns are byte-identical", [] { return cli_determinism(); });
  run(9, "node-index update with zero external info reduces to the plain one",
      [] { return h_operator_reduction(); });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
