#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dckcore/distsim.hpp"
#include "dckcore/graph.hpp"
#include "dckcore/hindex.hpp"
#include "dckcore/metrics.hpp"
#include "dckcore/oracle.hpp"
#include "dckcore/types.hpp"

namespace dckcore {

enum class Strategy { exact, rough };

inline std::string to_string(Strategy s) { return s == Strategy::exact ? "exact" : "rough"; }

inline Strategy parse_strategy(const std::string& s) {
  if (s == "exact") return Strategy::exact;
  if (s == "rough") return Strategy::rough;
  throw ArgumentError("unknown strategy '" + s + "' (expected exact or rough)");
}

/// Thresholds k_1 < ... < k_{P-1} splitting the graph into P parts. Part i
/// (counted from the bottom) holds the nodes with k_i <= coreness < k_{i+1},
/// taking k_0 = 0 and k_P = infinity.
struct DivisionPlan {
  Strategy strategy = Strategy::rough;
  std::vector<Coreness> thresholds;

  std::size_t parts() const noexcept { return thresholds.size() + 1; }

  void validate() const {
    if (thresholds.empty()) throw ArgumentError("a division plan needs at least one threshold");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (thresholds[i] < 1) throw ArgumentError("thresholds must be >= 1");
      if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
        throw ArgumentError("thresholds must be strictly increasing");
      }
    }
  }

  friend bool operator==(const DivisionPlan&, const DivisionPlan&) = default;
};

inline nlohmann::json to_json(const DivisionPlan& plan) {
  return {{"strategy", to_string(plan.strategy)}, {"thresholds", plan.thresholds}};
}

inline DivisionPlan plan_from_json(const nlohmann::json& j) {
  DivisionPlan plan;
  try {
    plan.strategy = parse_strategy(j.at("strategy").get<std::string>());
    plan.thresholds = j.at("thresholds").get<std::vector<Coreness>>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("invalid division plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

/// Thresholds round(deg_max * (i/P)^2) for i = 1..P-1, at least 1. Fails if
/// rounding leaves fewer than P-1 distinct values.
inline std::vector<Coreness> plan_thresholds(std::size_t deg_max, std::size_t parts) {
  if (parts < 2) throw ArgumentError("need at least 2 parts");
  if (deg_max < 1) throw ArgumentError("deg_max must be >= 1");
  std::vector<Coreness> out;
  for (std::size_t i = 1; i < parts; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(parts);
    const auto k = static_cast<Coreness>(
        std::max<long long>(1, std::llround(static_cast<double>(deg_max) * frac * frac)));
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  if (out.size() != parts - 1) {
    throw PlanningError("Deg_max " + std::to_string(deg_max) + " yields only " +
                        std::to_string(out.size()) + " distinct thresholds for " +
                        std::to_string(parts) + " parts; use fewer parts");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Division primitives. Each takes the external info already accumulated by
// the graph being split (empty = none) and returns external info for the
// pieces it produces.

namespace detail {

inline std::vector<Coreness> restrict_ext(std::span<const Coreness> ext,
                                          std::span<const NodeId> members) {
  std::vector<Coreness> out(members.size(), 0);
  if (ext.empty()) return out;
  for (std::size_t i = 0; i < members.size(); ++i) out[i] = ext[members[i]];
  return out;
}

inline std::vector<NodeId> complement(NodeId n, std::span<const NodeId> sorted_members) {
  std::vector<NodeId> out;
  out.reserve(n - sorted_members.size());
  std::size_t j = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (j < sorted_members.size() && sorted_members[j] == v) {
      ++j;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

/// E(v) for each node of `lower`: its inherited count plus the number of its
/// neighbors in g that belong to `upper_members`.
inline ExternalInfo external_info(const Graph& g, std::span<const NodeId> upper_members,
                                  const SubgraphView& lower, std::span<const Coreness> ext_in = {}) {
  detail::check_ext(g, ext_in);
  std::vector<char> upper(g.node_count(), 0);
  for (NodeId v : upper_members) upper[v] = 1;
  ExternalInfo ext{detail::restrict_ext(ext_in, lower.members)};
  for (std::size_t i = 0; i < lower.members.size(); ++i) {
    for (NodeId u : g.neighbors(lower.members[i])) ext.counts[i] += upper[u];
  }
  return ext;
}

struct ExactDivision {
  SubgraphView upper;  // G_k
  ExternalInfo upper_ext;
  SubgraphView lower;  // G_!k
  ExternalInfo ext;    // for lower
  ExtractionStats stats;
};

/// Splits g into its k-core and the remainder, generating external info for
/// the remainder.
inline ExactDivision exact_divide(const Graph& g, Coreness k, std::span<const Coreness> ext_in = {}) {
  if (k < 1) throw ArgumentError("threshold must be >= 1");
  ExactDivision out;
  auto members = kcore_members(g, k, ext_in, &out.stats);
  out.lower = induced_subgraph(g, detail::complement(g.node_count(), members));
  out.ext = external_info(g, members, out.lower, ext_in);
  out.upper_ext = ExternalInfo{detail::restrict_ext(ext_in, members)};
  out.upper = induced_subgraph(g, std::move(members));
  return out;
}

struct RoughDivision {
  SubgraphView rough_upper;  // superset of G_k
  ExternalInfo upper_ext;
  ExtractionStats stats;
};

/// Induced subgraph over nodes with deg(v) + ext(v) >= k, selected in a
/// single pass over the nodes without peeling.
inline RoughDivision rough_divide(const Graph& g, Coreness k, std::span<const Coreness> ext_in = {}) {
  if (k < 1) throw ArgumentError("threshold must be >= 1");
  detail::check_ext(g, ext_in);
  RoughDivision out;
  std::vector<NodeId> members;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) + (ext_in.empty() ? 0 : ext_in[v]) >= k) members.push_back(v);
  }
  out.stats.node_passes = 1;
  out.stats.removed = g.node_count() - members.size();
  out.upper_ext = ExternalInfo{detail::restrict_ext(ext_in, members)};
  out.rough_upper = induced_subgraph(g, std::move(members));
  return out;
}

struct RoughFinalization {
  std::vector<NodeCoreness> finalized;  // ids of g, coreness >= k
  SubgraphView lower;                   // G_!k
  ExternalInfo ext;                     // for lower
};

/// Keeps the rough-part nodes whose coreness reached k (these are exactly
/// G_k, with exact values) and builds the remainder with its external info.
inline RoughFinalization finalize_rough(const Graph& g, const SubgraphView& rough_upper,
                                        const CorenessMap& rough_coreness, Coreness k,
                                        std::span<const Coreness> ext_in = {}) {
  if (rough_coreness.size() != rough_upper.size()) {
    throw ArgumentError("rough coreness covers " + std::to_string(rough_coreness.size()) +
                        " nodes, rough part has " + std::to_string(rough_upper.size()));
  }
  RoughFinalization out;
  std::vector<NodeId> fin;
  for (NodeId i = 0; i < rough_upper.size(); ++i) {
    if (rough_coreness[i] >= k) {
      out.finalized.push_back({rough_upper.members[i], rough_coreness[i]});
      fin.push_back(rough_upper.members[i]);
    }
  }
  out.lower = induced_subgraph(g, detail::complement(g.node_count(), fin));
  out.ext = external_info(g, fin, out.lower, ext_in);
  return out;
}

// ---------------------------------------------------------------------------
// Multi-part execution

/// Decomposes one part: (graph, external info) -> coreness + metrics.
using DecompositionEngine = std::function<DecompositionResult(const Graph&, const ExternalInfo&)>;

inline DecompositionEngine sequential_engine() {
  return [](const Graph& g, const ExternalInfo& ext) { return decompose_sequential(g, ext); };
}

inline DecompositionEngine distributed_engine(SimConfig config) {
  return [config](const Graph& g, const ExternalInfo& ext) { return run_distributed(g, ext, config); };
}

struct PartResult {
  std::size_t part_index = 0;  // 0 = top part, processed first
  Coreness lower_threshold = 0;
  std::optional<Coreness> upper_threshold;  // threshold of the part above
  std::vector<NodeCoreness> finalized;      // ids of the divided graph
  std::vector<Coreness> ext;                // E(v) used for each finalized node
  std::size_t decomposed_nodes = 0;         // size of the graph handed to the engine
  RunMetrics metrics;
  ExtractionStats extraction;
};

struct DividedResult {
  CorenessMap coreness;
  std::vector<PartResult> parts;
  /// Summed part counters plus divide / ext-gen / decompose / merge timings.
  RunMetrics summary;
};

/// Union of the parts' finalized values over the nodes of g. Parts must be
/// disjoint and together cover every node.
inline CorenessMap merge_results(std::span<const PartResult> parts, const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<Coreness> values(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<ExternalId> overlaps, gaps;
  for (const auto& part : parts) {
    for (auto [v, c] : part.finalized) {
      if (v >= n) throw ArgumentError("part " + std::to_string(part.part_index) + " has node out of range");
      if (seen[v]) {
        overlaps.push_back(g.external_id(v));
        continue;
      }
      seen[v] = 1;
      values[v] = c;
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!seen[v]) gaps.push_back(g.external_id(v));
  }
  if (!overlaps.empty() || !gaps.empty()) {
    std::sort(overlaps.begin(), overlaps.end());
    overlaps.erase(std::unique(overlaps.begin(), overlaps.end()), overlaps.end());
    std::string msg = "cannot merge parts:";
    auto list = [&msg](const char* label, const std::vector<ExternalId>& ids) {
      if (ids.empty()) return;
      msg += std::string(" ") + label + " [";
      for (std::size_t i = 0; i < ids.size() && i < 20; ++i) {
        msg += (i ? "," : "") + std::to_string(ids[i]);
      }
      if (ids.size() > 20) msg += ",...";
      msg += "]";
    };
    list("overlapping", overlaps);
    list("uncovered", gaps);
    throw MergeError(msg, std::move(overlaps), std::move(gaps));
  }
  return {std::move(values)};
}

namespace detail {

inline DecompositionResult run_part(const DecompositionEngine& engine, std::size_t part,
                                    const Graph& g, const ExternalInfo& ext) {
  if (g.empty()) return {};
  try {
    return engine(g, ext);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("part " + std::to_string(part) + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError("part " + std::to_string(part) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("part " + std::to_string(part) + ": " + e.what());
  }
}

}  // namespace detail

/// Divides g per `plan` and decomposes the parts one at a time, top-down.
///
/// Each stage splits the current residual graph at the next lower threshold;
/// the residual carries, for every node, the number of its neighbors already
/// finalized in higher parts. Exact strategy peels the residual to its k-core
/// and decomposes that. Rough strategy decomposes the cheap superset
/// {v : deg_residual(v) + E(v) >= k}, keeps the nodes that reach k and pushes
/// the rest down. The bottom part is whatever residual remains.
inline DividedResult run_divided(const Graph& g, const DivisionPlan& plan,
                                 const DecompositionEngine& engine) {
  plan.validate();
  DividedResult result;
  auto& timings = result.summary.phase_timings;
  timings["divide"] = 0;
  timings["ext-gen"] = 0;
  timings["decompose"] = 0;

  Graph owned;
  const Graph* residual = &g;
  std::vector<NodeId> to_root;  // empty = identity
  ExternalInfo ext = ExternalInfo::zeros(g.node_count());
  auto root_of = [&](NodeId v) { return to_root.empty() ? v : to_root[v]; };

  // Replaces the residual by `lower` (a view into the current residual).
  auto descend = [&](SubgraphView&& lower, ExternalInfo&& lower_ext) {
    std::vector<NodeId> next(lower.members.size());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = root_of(lower.members[i]);
    to_root = std::move(next);
    owned = std::move(lower.graph);
    residual = &owned;
    ext = std::move(lower_ext);
  };

  const std::size_t parts = plan.parts();
  for (std::size_t p = 0; p + 1 < parts; ++p) {
    const Coreness k = plan.thresholds[parts - 2 - p];
    PartResult part;
    part.part_index = p;
    part.lower_threshold = k;
    if (p > 0) part.upper_threshold = plan.thresholds[parts - 1 - p];

    if (plan.strategy == Strategy::exact) {
      std::vector<NodeId> members;
      SubgraphView upper, lower;
      {
        PhaseTimer t(timings, "divide");
        members = kcore_members(*residual, k, ext.view(), &part.extraction);
        lower = induced_subgraph(*residual, detail::complement(residual->node_count(), members));
        upper = induced_subgraph(*residual, members);
      }
      ExternalInfo upper_ext, lower_ext;
      {
        PhaseTimer t(timings, "ext-gen");
        upper_ext = ExternalInfo{detail::restrict_ext(ext.view(), upper.members)};
        lower_ext = external_info(*residual, members, lower, ext.view());
      }
      DecompositionResult decomposed;
      {
        PhaseTimer t(timings, "decompose");
        decomposed = detail::run_part(engine, p, upper.graph, upper_ext);
      }
      part.decomposed_nodes = upper.size();
      for (NodeId i = 0; i < upper.size(); ++i) {
        part.finalized.push_back({root_of(upper.members[i]), decomposed.coreness[i]});
        part.ext.push_back(upper_ext[i]);
      }
      part.metrics = std::move(decomposed.metrics);
      descend(std::move(lower), std::move(lower_ext));
    } else {
      RoughDivision rough;
      {
        PhaseTimer t(timings, "divide");
        rough = rough_divide(*residual, k, ext.view());
      }
      part.extraction = rough.stats;
      DecompositionResult decomposed;
      {
        PhaseTimer t(timings, "decompose");
        decomposed = detail::run_part(engine, p, rough.rough_upper.graph, rough.upper_ext);
      }
      part.decomposed_nodes = rough.rough_upper.size();
      std::vector<NodeId> fin;
      for (NodeId i = 0; i < rough.rough_upper.size(); ++i) {
        if (decomposed.coreness[i] < k) continue;
        fin.push_back(rough.rough_upper.members[i]);
        part.finalized.push_back({root_of(fin.back()), decomposed.coreness[i]});
        part.ext.push_back(rough.upper_ext[i]);
      }
      SubgraphView lower;
      {
        PhaseTimer t(timings, "divide");
        lower = induced_subgraph(*residual, detail::complement(residual->node_count(), fin));
      }
      ExternalInfo lower_ext;
      {
        PhaseTimer t(timings, "ext-gen");
        lower_ext = external_info(*residual, fin, lower, ext.view());
      }
      part.metrics = std::move(decomposed.metrics);
      descend(std::move(lower), std::move(lower_ext));
    }
    result.parts.push_back(std::move(part));
  }

  PartResult bottom;
  bottom.part_index = parts - 1;
  bottom.lower_threshold = 0;
  bottom.upper_threshold = plan.thresholds.front();
  DecompositionResult decomposed;
  {
    PhaseTimer t(timings, "decompose");
    decomposed = detail::run_part(engine, parts - 1, *residual, ext);
  }
  bottom.decomposed_nodes = residual->node_count();
  for (NodeId i = 0; i < residual->node_count(); ++i) {
    bottom.finalized.push_back({root_of(i), decomposed.coreness[i]});
    bottom.ext.push_back(ext[i]);
  }
  bottom.metrics = std::move(decomposed.metrics);
  result.parts.push_back(std::move(bottom));

  for (const auto& part : result.parts) {
    RunMetrics counters = part.metrics;
    counters.phase_timings.clear();
    result.summary += counters;
  }
  {
    PhaseTimer t(timings, "merge");
    result.coreness = merge_results(result.parts, g);
  }
  return result;
}

}  // namespace dckcore
