#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dckcore/graph.hpp"
#include "dckcore/metrics.hpp"
#include "dckcore/oracle.hpp"
#include "dckcore/types.hpp"

namespace dckcore {

/// Node-index update with external information.
///
/// Returns ext + the largest i such that at least i of the values are
/// >= ext + i. This is the h-index of the values extended by `ext` entries of
/// unbounded estimate; with ext = 0 it is the plain h-index. Values are
/// bucketed by a counting sort since only the range [ext, ext + len] matters.
/// Reuses its scratch buffer, so keep one per thread.
class HIndexKernel {
 public:
  template <class ValueAt>
  Coreness operator()(std::size_t len, Coreness ext, ValueAt&& value_at) {
    counts_.assign(len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) {
      const Coreness c = value_at(i);
      const std::size_t slot = c > ext ? std::min<std::size_t>(c - ext, len) : 0;
      ++counts_[slot];
    }
    std::size_t at_least = 0;
    for (std::size_t i = len; i >= 1; --i) {
      at_least += counts_[i];
      if (at_least >= i) return ext + static_cast<Coreness>(i);
    }
    return ext;
  }

 private:
  std::vector<std::uint32_t> counts_;
};

inline Coreness h_operator_ext(std::span<const Coreness> cores, Coreness ext) {
  HIndexKernel kernel;
  return kernel(cores.size(), ext, [&](std::size_t i) { return cores[i]; });
}

/// Largest i such that at least i of the values are >= i; 0 when empty.
inline Coreness h_operator(std::span<const Coreness> cores) { return h_operator_ext(cores, 0); }

struct DecompositionResult {
  CorenessMap coreness;
  RunMetrics metrics;
};

/// Called with sweep 0 and the initial estimates, then after each sweep with
/// the estimates that sweep produced.
using SweepObserver = std::function<void(std::uint64_t sweep, std::span<const Coreness> estimates)>;

struct SequentialOptions {
  /// Explicit starting estimates; empty means deg(v) + ext[v]. Must dominate
  /// the true coreness for the result to be exact.
  std::vector<Coreness> initial;
  /// Safety cap on sweeps; 0 picks 2n + 8.
  std::uint64_t max_sweeps = 0;
  SweepObserver observer;
};

namespace detail {

inline std::vector<Coreness> initial_estimates(const Graph& g, std::span<const Coreness> ext) {
  std::vector<Coreness> est(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    est[v] = static_cast<Coreness>(g.degree(v)) + ext[v];
  }
  return est;
}

inline void require_ext(const Graph& g, const ExternalInfo& ext) {
  if (ext.size() != g.node_count()) {
    throw ArgumentError("external info covers " + std::to_string(ext.size()) +
                        " nodes, graph has " + std::to_string(g.node_count()));
  }
}

inline std::uint64_t sweep_cap(const Graph& g, std::uint64_t requested) {
  return requested ? requested : 2 * std::uint64_t{g.node_count()} + 8;
}

}  // namespace detail

/// Reference engine: synchronous sweeps where every node recomputes its
/// estimate from its neighbors' estimates of the previous sweep. Stops after
/// the first sweep that changes nothing.
inline DecompositionResult decompose_sequential(const Graph& g, const ExternalInfo& ext,
                                                const SequentialOptions& options = {}) {
  detail::require_ext(g, ext);
  const NodeId n = g.node_count();
  std::vector<Coreness> prev;
  if (options.initial.empty()) {
    prev = detail::initial_estimates(g, ext.view());
  } else {
    if (options.initial.size() != n) throw ArgumentError("initial estimates size mismatch");
    prev = options.initial;
  }
  if (options.observer) options.observer(0, prev);

  const std::uint64_t cap = detail::sweep_cap(g, options.max_sweeps);
  std::vector<Coreness> next(n);
  HIndexKernel kernel;
  RunMetrics metrics;
  while (true) {
    if (metrics.sweeps >= cap) {
      throw ConvergenceError("no fixpoint after " + std::to_string(cap) + " sweeps");
    }
    std::uint64_t changed = 0;
    for (NodeId v = 0; v < n; ++v) {
      const auto nbrs = g.neighbors(v);
      next[v] = kernel(nbrs.size(), ext[v], [&](std::size_t i) { return prev[nbrs[i]]; });
      changed += next[v] != prev[v];
    }
    metrics.pulls += n;
    metrics.pulls_fine += 2 * g.edge_count();
    metrics.record_sweep(changed);
    prev.swap(next);
    if (options.observer) options.observer(metrics.sweeps, prev);
    if (changed == 0) break;
  }
  return {CorenessMap{std::move(prev)}, std::move(metrics)};
}

}  // namespace dckcore
