#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "dckcore/graph.hpp"
#include "dckcore/types.hpp"

namespace dckcore {

/// Coreness value per internal node id.
struct CorenessMap {
  std::vector<Coreness> values;

  std::size_t size() const noexcept { return values.size(); }
  Coreness operator[](NodeId v) const { return values[v]; }
  Coreness k_max() const noexcept {
    return values.empty() ? 0 : *std::max_element(values.begin(), values.end());
  }

  friend bool operator==(const CorenessMap&, const CorenessMap&) = default;
};

/// Work counters for subgraph extraction.
struct ExtractionStats {
  std::size_t node_passes = 0;  // full scans over the node set
  std::size_t peel_rounds = 0;  // waves of removals (exact extraction only)
  std::size_t removed = 0;
};

namespace detail {

inline void check_ext(const Graph& g, std::span<const Coreness> ext) {
  if (!ext.empty() && ext.size() != g.node_count()) {
    throw ArgumentError("external info covers " + std::to_string(ext.size()) +
                        " nodes, graph has " + std::to_string(g.node_count()));
  }
}

}  // namespace detail

/// Exact coreness by bucket-queue peeling in O(n + m).
///
/// With `ext`, node v additionally counts ext[v] neighbors that are never
/// removed, i.e. the result is the coreness in g completed by ext[v] edges to
/// an infinitely dense core. An empty `ext` means all zero.
inline CorenessMap peel_coreness(const Graph& g, std::span<const Coreness> ext = {}) {
  detail::check_ext(g, ext);
  const NodeId n = g.node_count();
  std::vector<Coreness> deg(n);
  Coreness max_deg = 0;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = static_cast<Coreness>(g.degree(v)) + (ext.empty() ? 0 : ext[v]);
    max_deg = std::max(max_deg, deg[v]);
  }
  // bin[d] = first position of degree-d nodes in `order`.
  std::vector<std::size_t> bin(std::size_t{max_deg} + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++bin[deg[v] + 1];
  for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
  std::vector<NodeId> order(n);
  std::vector<std::size_t> pos(n);
  {
    std::vector<std::size_t> next(bin.begin(), bin.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
      pos[v] = next[deg[v]]++;
      order[pos[v]] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    for (NodeId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        // Swap u with the first node of its bin, then shrink the bin.
        const Coreness du = deg[u];
        const std::size_t pu = pos[u];
        const std::size_t pw = bin[du];
        const NodeId w = order[pw];
        if (u != w) {
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
          pos[u] = pw;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  return {std::move(deg)};
}

/// Node set of the k-core (sorted), peeled in synchronous waves: each round
/// removes every node whose remaining degree (plus ext) is below k.
inline std::vector<NodeId> kcore_members(const Graph& g, Coreness k,
                                         std::span<const Coreness> ext = {},
                                         ExtractionStats* stats = nullptr) {
  detail::check_ext(g, ext);
  const NodeId n = g.node_count();
  std::vector<std::size_t> deg(n);
  std::vector<char> removed(n, 0);
  std::vector<NodeId> frontier;
  ExtractionStats local;
  ++local.node_passes;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = g.degree(v) + (ext.empty() ? 0 : ext[v]);
    if (deg[v] < k) {
      removed[v] = 1;
      frontier.push_back(v);
    }
  }
  ++local.peel_rounds;
  std::vector<NodeId> next;
  while (!frontier.empty()) {
    local.removed += frontier.size();
    next.clear();
    for (NodeId v : frontier) {
      for (NodeId u : g.neighbors(v)) {
        if (removed[u]) continue;
        if (--deg[u] < k) {
          removed[u] = 1;
          next.push_back(u);
        }
      }
    }
    frontier.swap(next);
    if (!frontier.empty()) ++local.peel_rounds;
  }
  std::vector<NodeId> members;
  members.reserve(n - local.removed);
  for (NodeId v = 0; v < n; ++v) {
    if (!removed[v]) members.push_back(v);
  }
  if (stats) *stats = local;
  return members;
}

/// The k-core G_k as an induced subgraph. k = 0 yields all of g.
inline SubgraphView extract_kcore(const Graph& g, Coreness k, ExtractionStats* stats = nullptr) {
  return induced_subgraph(g, kcore_members(g, k, {}, stats));
}

/// True iff `candidate` is exactly the node set of the k-core: every member
/// keeps degree >= k inside the candidate and no larger set does.
inline bool verify_kcore(const Graph& g, std::vector<NodeId> candidate, Coreness k) {
  std::sort(candidate.begin(), candidate.end());
  candidate.erase(std::unique(candidate.begin(), candidate.end()), candidate.end());
  if (!candidate.empty() && candidate.back() >= g.node_count()) {
    throw ArgumentError("candidate node out of range");
  }
  std::vector<char> in(g.node_count(), 0);
  for (NodeId v : candidate) in[v] = 1;
  for (NodeId v : candidate) {
    std::size_t inside = 0;
    for (NodeId u : g.neighbors(v)) inside += in[u];
    if (inside < k) return false;
  }
  // Any k-degree-closed set is contained in the k-core, so with the property
  // above, equality reduces to equal size.
  return kcore_members(g, k).size() == candidate.size();
}

/// One "external_id<TAB>coreness" line per node, sorted by external id.
inline void write_coreness(std::ostream& out, const Graph& g, const CorenessMap& coreness) {
  if (coreness.size() != g.node_count()) throw ArgumentError("coreness map size mismatch");
  std::vector<std::pair<ExternalId, Coreness>> rows(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) rows[v] = {g.external_id(v), coreness[v]};
  std::sort(rows.begin(), rows.end());
  for (auto [id, c] : rows) out << id << '\t' << c << '\n';
}

}  // namespace dckcore
