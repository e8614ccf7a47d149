#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dckcore/graph.hpp"
#include "dckcore/hindex.hpp"
#include "dckcore/metrics.hpp"
#include "dckcore/types.hpp"

namespace dckcore {

enum class SimMode { synchronous, asynchronous };

inline std::size_t hardware_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Upper bound on physical threads: DCKCORE_THREADS if set, else the core count.
inline std::size_t thread_cap() {
  if (const char* env = std::getenv("DCKCORE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return hardware_workers();
}

struct SimConfig {
  std::size_t partitions = hardware_workers();
  std::size_t batch_size = 1024;
  SimMode mode = SimMode::asynchronous;
  /// 0 picks 2n + 8.
  std::uint64_t max_sweeps = 0;
  /// Physical threads; 0 means min(partitions, thread_cap()). Never changes
  /// results or metrics.
  std::size_t threads = 0;

  void validate() const {
    if (partitions < 1) throw ArgumentError("partitions must be >= 1");
    if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  }
};

/// Shared estimate store standing in for the parameter servers. In
/// synchronous mode writes go to a staging buffer that becomes visible at
/// publish(); in asynchronous mode they are applied in place.
class EstimateStore {
 public:
  EstimateStore(std::vector<Coreness> initial, SimMode mode)
      : current_(std::move(initial)), mode_(mode) {
    if (mode_ == SimMode::synchronous) staged_ = current_;
  }

  std::span<const Coreness> view() const noexcept { return current_; }
  Coreness read(NodeId v) const { return current_[v]; }

  void write(NodeId v, Coreness value) {
    if (mode_ == SimMode::synchronous) {
      staged_[v] = value;
    } else {
      current_[v] = value;
    }
  }

  void publish() {
    if (mode_ == SimMode::synchronous) current_ = staged_;
  }

  std::vector<Coreness> release() && { return std::move(current_); }

 private:
  std::vector<Coreness> current_;
  std::vector<Coreness> staged_;
  SimMode mode_;
};

namespace detail {

struct Push {
  NodeId node;
  Coreness value;
};

struct WorkerState {
  std::vector<NodeId> owned;  // ascending
  HIndexKernel kernel;
  std::vector<Push> pending;
  std::uint64_t pulls = 0;
  std::uint64_t pulls_fine = 0;
};

// Runs fn(w) for every worker, spread over `threads` threads.
template <class Fn>
void for_each_worker(std::vector<WorkerState>& workers, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || workers.size() <= 1) {
    for (std::size_t w = 0; w < workers.size(); ++w) fn(w);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t w = t; w < workers.size(); w += threads) fn(w);
    });
  }
}

}  // namespace detail

/// Simulated parameter-server decomposition.
///
/// Nodes are hash-partitioned over workers (v mod partitions). Each sweep is a
/// sequence of rounds; in round r every worker takes the r-th batch of its
/// nodes (ascending id), pulls their neighbors' estimates, recomputes them
/// with the node-index update, and pushes the values that changed. In
/// asynchronous mode the store applies a round's pushes before the next round
/// starts; in synchronous mode pushes become visible only at the sweep
/// boundary, which reproduces decompose_sequential exactly. The run ends
/// after the first sweep without pushes.
inline DecompositionResult run_distributed(const Graph& g, const ExternalInfo& ext,
                                           const SimConfig& config,
                                           const SweepObserver& observer = {}) {
  config.validate();
  detail::require_ext(g, ext);
  const NodeId n = g.node_count();

  std::vector<detail::WorkerState> workers(config.partitions);
  for (NodeId v = 0; v < n; ++v) workers[v % config.partitions].owned.push_back(v);
  std::size_t rounds = 0;
  for (const auto& w : workers) {
    rounds = std::max(rounds, (w.owned.size() + config.batch_size - 1) / config.batch_size);
  }
  const std::size_t threads =
      std::min(config.threads ? config.threads : thread_cap(), config.partitions);

  EstimateStore store(detail::initial_estimates(g, ext.view()), config.mode);
  if (observer) observer(0, store.view());

  // Processes batch `batch` of worker `w` against the current store view.
  auto process = [&](std::size_t w, std::size_t batch) {
    auto& worker = workers[w];
    const std::size_t begin = batch * config.batch_size;
    if (begin >= worker.owned.size()) return;
    const std::size_t end = std::min(worker.owned.size(), begin + config.batch_size);
    const auto estimates = store.view();
    for (std::size_t i = begin; i < end; ++i) {
      const NodeId v = worker.owned[i];
      const auto nbrs = g.neighbors(v);
      const Coreness updated =
          worker.kernel(nbrs.size(), ext[v], [&](std::size_t j) { return estimates[nbrs[j]]; });
      worker.pulls_fine += nbrs.size();
      if (updated != estimates[v]) worker.pending.push_back({v, updated});
    }
    worker.pulls += end - begin;
  };

  auto apply_pending = [&] {
    std::uint64_t pushed = 0;
    for (auto& worker : workers) {
      for (auto [v, value] : worker.pending) store.write(v, value);
      pushed += worker.pending.size();
      worker.pending.clear();
    }
    return pushed;
  };

  const std::uint64_t cap = detail::sweep_cap(g, config.max_sweeps);
  RunMetrics metrics;
  while (true) {
    if (metrics.sweeps >= cap) {
      throw ConvergenceError("no fixpoint after " + std::to_string(cap) + " sweeps");
    }
    std::uint64_t pushed = 0;
    if (config.mode == SimMode::synchronous) {
      detail::for_each_worker(workers, threads, [&](std::size_t w) {
        for (std::size_t r = 0; r < rounds; ++r) process(w, r);
      });
      pushed = apply_pending();
      store.publish();
    } else {
      for (std::size_t r = 0; r < rounds; ++r) {
        detail::for_each_worker(workers, threads, [&](std::size_t w) { process(w, r); });
        pushed += apply_pending();
      }
    }
    metrics.record_sweep(pushed);
    if (observer) observer(metrics.sweeps, store.view());
    if (pushed == 0) break;
  }
  for (const auto& worker : workers) {
    metrics.pulls += worker.pulls;
    metrics.pulls_fine += worker.pulls_fine;
  }
  return {CorenessMap{std::move(store).release()}, std::move(metrics)};
}

/// Communication comparison between an undivided run and the parts of a
/// divided run.
struct ComparisonReport {
  std::uint64_t baseline_total = 0;
  std::vector<std::uint64_t> part_totals;
  std::uint64_t divided_total = 0;
  /// divided_total / baseline_total; absent without parts or with an empty
  /// baseline.
  std::optional<double> ratio;
  std::vector<std::uint64_t> baseline_series;
  std::vector<std::vector<std::uint64_t>> part_series;
};

inline ComparisonReport compare_runs(const RunMetrics& baseline, std::span<const RunMetrics> divided) {
  ComparisonReport report;
  report.baseline_total = baseline.total_updates;
  report.baseline_series = baseline.updates_per_sweep;
  for (const auto& part : divided) {
    report.part_totals.push_back(part.total_updates);
    report.divided_total += part.total_updates;
    report.part_series.push_back(part.updates_per_sweep);
  }
  if (!divided.empty() && baseline.total_updates > 0) {
    report.ratio = static_cast<double>(report.divided_total) /
                   static_cast<double>(report.baseline_total);
  }
  return report;
}

inline nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json j;
  j["baseline_total_updates"] = r.baseline_total;
  j["part_total_updates"] = r.part_totals;
  j["divided_total_updates"] = r.divided_total;
  j["ratio"] = r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr);
  j["baseline_updates_per_sweep"] = r.baseline_series;
  j["part_updates_per_sweep"] = r.part_series;
  return j;
}

}  // namespace dckcore
