#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dckcore {

/// Counters from one decomposition run. The communication amount is
/// `total_updates`: the number of changed estimates pushed to the store.
struct RunMetrics {
  std::uint64_t sweeps = 0;
  std::vector<std::uint64_t> updates_per_sweep;
  std::uint64_t total_updates = 0;
  std::uint64_t pulls = 0;       // one per (node, sweep) neighbor fetch
  std::uint64_t pulls_fine = 0;  // one per neighbor estimate read
  std::uint64_t pushes = 0;
  std::map<std::string, double> phase_timings;  // seconds

  void record_sweep(std::uint64_t updates) {
    ++sweeps;
    updates_per_sweep.push_back(updates);
    total_updates += updates;
    pushes += updates;
  }

  /// Adds another run's counters: sweeps and totals sum, per-sweep series
  /// add elementwise.
  RunMetrics& operator+=(const RunMetrics& other) {
    sweeps += other.sweeps;
    if (updates_per_sweep.size() < other.updates_per_sweep.size()) {
      updates_per_sweep.resize(other.updates_per_sweep.size(), 0);
    }
    for (std::size_t i = 0; i < other.updates_per_sweep.size(); ++i) {
      updates_per_sweep[i] += other.updates_per_sweep[i];
    }
    total_updates += other.total_updates;
    pulls += other.pulls;
    pulls_fine += other.pulls_fine;
    pushes += other.pushes;
    for (const auto& [name, secs] : other.phase_timings) phase_timings[name] += secs;
    return *this;
  }

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

inline constexpr int kMetricsSchema = 1;

/// JSON form {sweeps, updates_per_sweep[], total_updates, pulls, pulls_fine,
/// pushes, phase_timings{}}. Timings are wall-clock and vary between runs,
/// so they are only emitted when asked for.
inline nlohmann::json to_json(const RunMetrics& m, bool with_timings) {
  nlohmann::json j;
  j["sweeps"] = m.sweeps;
  j["updates_per_sweep"] = m.updates_per_sweep;
  j["total_updates"] = m.total_updates;
  j["pulls"] = m.pulls;
  j["pulls_fine"] = m.pulls_fine;
  j["pushes"] = m.pushes;
  j["phase_timings"] = nlohmann::json::object();
  if (with_timings) {
    for (const auto& [name, secs] : m.phase_timings) j["phase_timings"][name] = secs;
  }
  return j;
}

inline RunMetrics metrics_from_json(const nlohmann::json& j) {
  RunMetrics m;
  m.sweeps = j.at("sweeps").get<std::uint64_t>();
  m.updates_per_sweep = j.at("updates_per_sweep").get<std::vector<std::uint64_t>>();
  m.total_updates = j.at("total_updates").get<std::uint64_t>();
  m.pulls = j.at("pulls").get<std::uint64_t>();
  m.pulls_fine = j.at("pulls_fine").get<std::uint64_t>();
  m.pushes = j.at("pushes").get<std::uint64_t>();
  if (j.contains("phase_timings")) {
    m.phase_timings = j.at("phase_timings").get<std::map<std::string, double>>();
  }
  return m;
}

/// Adds the elapsed wall-clock time to `sink[name]` on destruction.
class PhaseTimer {
 public:
  PhaseTimer(std::map<std::string, double>& sink, std::string name)
      : sink_(sink), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;
  ~PhaseTimer() {
    sink_[name_] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::map<std::string, double>& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace dckcore
