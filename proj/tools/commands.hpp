#pragma once

// Subcommand implementations behind the dckcore executable. They take plain
// structs so tests can run them in-process.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dckcore/dckcore.hpp"

namespace dckcore::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kInconsistent = 3, kInternal = 4 };

enum class Mode { oracle, baseline, divided };

inline Mode parse_mode(const std::string& s) {
  if (s == "oracle") return Mode::oracle;
  if (s == "baseline") return Mode::baseline;
  if (s == "divided") return Mode::divided;
  throw ArgumentError("unknown mode '" + s + "' (expected oracle, baseline or divided)");
}

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::oracle: return "oracle";
    case Mode::baseline: return "baseline";
    case Mode::divided: return "divided";
  }
  return "?";
}

struct JobSpec {
  std::string input;
  std::string output;  // empty = stdout
  Mode mode = Mode::oracle;
  Strategy strategy = Strategy::rough;
  std::vector<Coreness> thresholds;
  std::optional<std::size_t> parts;
  std::string plan_in;
  std::string plan_out;
  SimConfig sim;
  std::string metrics_out;
  std::string report_out;  // compare only; empty = stdout
  bool timings = false;
  std::optional<NodeId> node_count;
  std::uint64_t seed = 0;
};

namespace detail {

inline Graph load_input(const JobSpec& spec) {
  std::ifstream in(spec.input);
  if (!in) throw IoError("cannot open input '" + spec.input + "'");
  LoadOptions options;
  options.node_count = spec.node_count;
  const std::string sidecar = spec.input + ".nodes";
  if (!options.node_count && std::filesystem::exists(sidecar)) {
    std::ifstream side(sidecar);
    std::uint64_t n = 0;
    if (!(side >> n)) throw IoError("malformed node-count sidecar '" + sidecar + "'");
    options.node_count = static_cast<NodeId>(n);
  }
  return load_edge_list(in, options);
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline DivisionPlan resolve_plan(const JobSpec& spec, const Graph& g) {
  if (!spec.plan_in.empty()) {
    if (!spec.thresholds.empty() || spec.parts) {
      throw ArgumentError("--plan excludes --thresholds and --parts");
    }
    std::ifstream in(spec.plan_in);
    if (!in) throw IoError("cannot open plan '" + spec.plan_in + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ArgumentError(std::string("malformed plan: ") + e.what());
    }
    return plan_from_json(j);
  }
  if (spec.thresholds.empty() == !spec.parts.has_value()) {
    throw ArgumentError("divided mode needs exactly one of --thresholds or --parts");
  }
  DivisionPlan plan;
  plan.strategy = spec.strategy;
  plan.thresholds = spec.parts ? plan_thresholds(g.max_degree(), *spec.parts) : spec.thresholds;
  plan.validate();
  return plan;
}

inline nlohmann::json part_json(const PartResult& part, bool timings) {
  nlohmann::json j;
  j["part_index"] = part.part_index;
  j["lower_threshold"] = part.lower_threshold;
  j["upper_threshold"] = part.upper_threshold ? nlohmann::json(*part.upper_threshold)
                                              : nlohmann::json(nullptr);
  j["decomposed_nodes"] = part.decomposed_nodes;
  j["finalized_nodes"] = part.finalized.size();
  j["metrics"] = to_json(part.metrics, timings);
  return j;
}

inline std::string coreness_text(const Graph& g, const CorenessMap& c) {
  std::ostringstream out;
  write_coreness(out, g, c);
  return out.str();
}

// First `limit` external ids where the maps disagree.
inline std::vector<ExternalId> mismatches(const Graph& g, const CorenessMap& a,
                                          const CorenessMap& b, std::size_t limit = 10) {
  std::vector<ExternalId> out;
  for (NodeId v = 0; v < g.node_count() && out.size() < limit; ++v) {
    if (a.size() <= v || b.size() <= v || a[v] != b[v]) out.push_back(g.external_id(v));
  }
  if (a.size() != b.size() && out.empty()) out.push_back(-1);
  return out;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    std::cerr << "error: parse error at " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PlanningError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace detail

/// Result of checking the three decompositions against each other.
inline int check_consistency(const Graph& g, const CorenessMap& oracle, const CorenessMap& baseline,
                             const CorenessMap& divided, std::ostream& err) {
  int status = kOk;
  auto check = [&](const char* name, const CorenessMap& m) {
    const auto diff = detail::mismatches(g, oracle, m);
    if (diff.empty()) return;
    status = kInconsistent;
    err << "mismatch: " << name << " differs from oracle at nodes";
    for (ExternalId id : diff) err << ' ' << id;
    err << '\n';
  };
  check("baseline", baseline);
  check("divided", divided);
  return status;
}

/// decompose: oracle | baseline | divided, writes coreness and metrics.
inline int cmd_decompose(const JobSpec& spec) {
  return detail::guarded([&] {
    spec.sim.validate();
    std::map<std::string, double> timings;
    Graph g;
    {
      PhaseTimer t(timings, "load");
      g = detail::load_input(spec);
    }
    nlohmann::json metrics_doc;
    metrics_doc["schema"] = kMetricsSchema;
    metrics_doc["mode"] = to_string(spec.mode);
    metrics_doc["nodes"] = g.node_count();
    metrics_doc["edges"] = g.edge_count();
    CorenessMap coreness;
    switch (spec.mode) {
      case Mode::oracle: {
        PhaseTimer t(timings, "decompose");
        coreness = peel_coreness(g);
        break;
      }
      case Mode::baseline: {
        DecompositionResult r;
        {
          PhaseTimer t(timings, "decompose");
          r = run_distributed(g, ExternalInfo::zeros(g.node_count()), spec.sim);
        }
        coreness = std::move(r.coreness);
        r.metrics.phase_timings = timings;
        metrics_doc["metrics"] = to_json(r.metrics, spec.timings);
        break;
      }
      case Mode::divided: {
        const DivisionPlan plan = detail::resolve_plan(spec, g);
        if (!spec.plan_out.empty()) detail::write_text(spec.plan_out, to_json(plan).dump(2) + "\n");
        DividedResult r = run_divided(g, plan, distributed_engine(spec.sim));
        coreness = std::move(r.coreness);
        for (const auto& [name, secs] : timings) r.summary.phase_timings[name] += secs;
        metrics_doc["plan"] = to_json(plan);
        metrics_doc["metrics"] = to_json(r.summary, spec.timings);
        metrics_doc["parts"] = nlohmann::json::array();
        for (const auto& part : r.parts) metrics_doc["parts"].push_back(detail::part_json(part, spec.timings));
        break;
      }
    }
    if (spec.mode == Mode::oracle) {
      RunMetrics m;
      m.phase_timings = timings;
      metrics_doc["metrics"] = to_json(m, spec.timings);
    }
    detail::write_text(spec.output, detail::coreness_text(g, coreness));
    if (!spec.metrics_out.empty()) detail::write_text(spec.metrics_out, metrics_doc.dump(2) + "\n");
    return int{kOk};
  });
}

/// compare: oracle vs baseline vs divided, then a communication report.
inline int cmd_compare(const JobSpec& spec) {
  return detail::guarded([&] {
    spec.sim.validate();
    const Graph g = detail::load_input(spec);
    JobSpec divided_spec = spec;
    if (divided_spec.plan_in.empty() && divided_spec.thresholds.empty() && !divided_spec.parts) {
      divided_spec.parts = 2;
    }
    const DivisionPlan plan = detail::resolve_plan(divided_spec, g);
    const CorenessMap oracle = peel_coreness(g);
    const DecompositionResult baseline =
        run_distributed(g, ExternalInfo::zeros(g.node_count()), spec.sim);
    const DividedResult divided = run_divided(g, plan, distributed_engine(spec.sim));

    const int status = check_consistency(g, oracle, baseline.coreness, divided.coreness, std::cerr);
    std::vector<RunMetrics> part_metrics;
    for (const auto& part : divided.parts) part_metrics.push_back(part.metrics);
    nlohmann::json doc;
    doc["schema"] = kMetricsSchema;
    doc["consistent"] = status == kOk;
    doc["nodes"] = g.node_count();
    doc["edges"] = g.edge_count();
    doc["k_max"] = oracle.k_max();
    doc["plan"] = to_json(plan);
    doc["report"] = to_json(compare_runs(baseline.metrics, part_metrics));
    doc["baseline"] = to_json(baseline.metrics, spec.timings);
    doc["divided"] = to_json(divided.summary, spec.timings);
    detail::write_text(spec.report_out, doc.dump(2) + "\n");
    if (status == kOk) std::cerr << "consistent\n";
    return status;
  });
}

struct GenerateSpec {
  std::string model;  // "ba" or "er"
  std::string first;  // n
  std::string second; // attach_m (ba) or p (er)
  std::uint64_t seed = 0;
  std::string output;  // empty = stdout
};

/// generate: synthetic edge list, plus "<output>.nodes" holding the node
/// count when writing to a file.
inline int cmd_generate(const GenerateSpec& spec) {
  return detail::guarded([&] {
    auto parse_count = [](const std::string& s, const char* what) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty() || s.front() == '-' || v >= kInvalidNode) {
        throw ArgumentError(std::string("invalid ") + what + " '" + s + "'");
      }
      return static_cast<NodeId>(v);
    };
    SyntheticModel model;
    if (spec.model == "ba") {
      model = PowerlawBA{parse_count(spec.first, "n"), parse_count(spec.second, "attach_m")};
    } else if (spec.model == "er") {
      std::size_t used = 0;
      double p = -1;
      try {
        p = std::stod(spec.second, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != spec.second.size()) throw ArgumentError("invalid p '" + spec.second + "'");
      model = ErdosRenyi{parse_count(spec.first, "n"), p};
    } else {
      throw ArgumentError("unknown model '" + spec.model + "' (expected ba or er)");
    }
    const Graph g = generate_synthetic(model, spec.seed);
    std::ostringstream out;
    write_edge_list(out, g);
    detail::write_text(spec.output, out.str());
    if (!spec.output.empty() && spec.output != "-") {
      detail::write_text(spec.output + ".nodes", std::to_string(g.node_count()) + "\n");
    }
    return int{kOk};
  });
}

}  // namespace dckcore::cli
