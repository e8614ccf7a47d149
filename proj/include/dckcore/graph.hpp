#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dckcore/types.hpp"

namespace dckcore {

using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Internal ids are dense in [0, node_count()). Each neighbor list is sorted
/// ascending and free of self-loops and duplicates; every undirected edge is
/// stored once in each endpoint's list. An optional id map translates
/// internal ids back to the caller's external ids.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph over `n` nodes from an arbitrary edge list. Self-loops
  /// are dropped and parallel edges collapsed. `ids`, when non-empty, must
  /// hold one external id per node.
  static Graph from_edges(NodeId n, std::span<const Edge> edges,
                          std::vector<ExternalId> ids = {}) {
    if (!ids.empty() && ids.size() != n) {
      throw ArgumentError("id map size does not match node count");
    }
    std::vector<std::uint64_t> offsets(std::size_t{n} + 1, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw ArgumentError("edge endpoint out of range");
      if (u == v) continue;
      ++offsets[u + 1];
      ++offsets[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    std::vector<NodeId> adj(offsets[n]);
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (auto [u, v] : edges) {
      if (u == v) continue;
      adj[cursor[u]++] = v;
      adj[cursor[v]++] = u;
    }
    // Sort and deduplicate each list, compacting in place.
    std::uint64_t write = 0;
    std::uint64_t begin = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const std::uint64_t end = offsets[v + 1];
      std::sort(adj.begin() + static_cast<std::ptrdiff_t>(begin),
                adj.begin() + static_cast<std::ptrdiff_t>(end));
      const std::uint64_t start = write;
      for (std::uint64_t i = begin; i < end; ++i) {
        if (i > begin && adj[i] == adj[i - 1]) continue;
        adj[write++] = adj[i];
      }
      begin = end;
      offsets[v] = start;
    }
    offsets[n] = write;
    adj.resize(write);
    adj.shrink_to_fit();
    return from_csr(std::move(offsets), std::move(adj), std::move(ids));
  }

  /// Adopts already-valid CSR arrays (sorted, symmetric, simple).
  static Graph from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> adjacency,
                        std::vector<ExternalId> ids = {}) {
    Graph g;
    g.offsets_ = std::move(offsets);
    g.adj_ = std::move(adjacency);
    g.ids_ = std::move(ids);
    return g;
  }

  NodeId node_count() const noexcept { return static_cast<NodeId>(offsets_.size() - 1); }
  std::uint64_t edge_count() const noexcept { return adj_.size() / 2; }
  bool empty() const noexcept { return node_count() == 0; }

  std::size_t degree(NodeId v) const {
    check(v);
    return static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    check(v);
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }

  std::size_t max_degree() const noexcept {
    std::size_t best = 0;
    for (NodeId v = 0; v < node_count(); ++v) {
      best = std::max<std::size_t>(best, offsets_[v + 1] - offsets_[v]);
    }
    return best;
  }

  bool has_id_map() const noexcept { return !ids_.empty(); }
  ExternalId external_id(NodeId v) const {
    check(v);
    return ids_.empty() ? static_cast<ExternalId>(v) : ids_[v];
  }
  /// Internal id of an external id, if present. Requires the id map to be
  /// sorted ascending, which holds for every graph built by this library.
  std::optional<NodeId> find_external(ExternalId id) const {
    if (ids_.empty()) {
      if (id < 0 || id >= static_cast<ExternalId>(node_count())) return std::nullopt;
      return static_cast<NodeId>(id);
    }
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<NodeId>(it - ids_.begin());
  }

  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> adjacency() const noexcept { return adj_; }
  std::span<const ExternalId> id_map() const noexcept { return ids_; }

  /// Every undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    const bool ids_equal = (a.ids_.empty() && b.ids_.empty()) || [&] {
      if (a.node_count() != b.node_count()) return false;
      for (NodeId v = 0; v < a.node_count(); ++v) {
        if (a.external_id(v) != b.external_id(v)) return false;
      }
      return true;
    }();
    return a.offsets_ == b.offsets_ && a.adj_ == b.adj_ && ids_equal;
  }

 private:
  void check(NodeId v) const {
    if (v >= node_count()) {
      throw ArgumentError("node " + std::to_string(v) + " out of range (n=" +
                          std::to_string(node_count()) + ")");
    }
  }

  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<ExternalId> ids_;
};

inline std::size_t degree(const Graph& g, NodeId v) { return g.degree(v); }
inline std::span<const NodeId> neighbors(const Graph& g, NodeId v) { return g.neighbors(v); }

/// Induced subgraph of a parent graph together with the id translation.
///
/// `members` holds the parent ids in ascending order; subgraph id i maps to
/// parent id members[i]. The materialized graph carries the parent's
/// external ids, so nested views keep reporting the original node names.
struct SubgraphView {
  const Graph* parent = nullptr;
  std::vector<NodeId> members;
  Graph graph;

  NodeId size() const noexcept { return static_cast<NodeId>(members.size()); }
  bool empty() const noexcept { return members.empty(); }
  NodeId to_parent(NodeId sub) const { return members.at(sub); }
  std::optional<NodeId> to_sub(NodeId parent_id) const {
    auto it = std::lower_bound(members.begin(), members.end(), parent_id);
    if (it == members.end() || *it != parent_id) return std::nullopt;
    return static_cast<NodeId>(it - members.begin());
  }
};

/// Induced subgraph over `members` (any order, duplicates ignored).
inline SubgraphView induced_subgraph(const Graph& g, std::vector<NodeId> members) {
  const NodeId n = g.node_count();
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && members.back() >= n) {
    throw ArgumentError("member " + std::to_string(members.back()) + " out of range (n=" +
                        std::to_string(n) + ")");
  }
  std::vector<NodeId> local(n, kInvalidNode);
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<NodeId>(i);

  std::vector<std::uint64_t> offsets(members.size() + 1, 0);
  std::vector<NodeId> adj;
  std::vector<ExternalId> ids(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const NodeId p = members[i];
    for (NodeId u : g.neighbors(p)) {
      // Monotone relabeling keeps the list sorted.
      if (local[u] != kInvalidNode) adj.push_back(local[u]);
    }
    offsets[i + 1] = adj.size();
    ids[i] = g.external_id(p);
  }
  if (!g.has_id_map()) {
    // Keep identity graphs id-map free only when the relabeling is identity.
    bool identity = true;
    for (std::size_t i = 0; i < members.size() && identity; ++i) identity = members[i] == i;
    if (identity) ids.clear();
  }
  SubgraphView view;
  view.parent = &g;
  view.members = std::move(members);
  view.graph = Graph::from_csr(std::move(offsets), std::move(adj), std::move(ids));
  return view;
}

// ---------------------------------------------------------------------------
// Edge-list text format

struct LoadOptions {
  /// Collapse parallel edges; when false a repeated edge is an error.
  bool dedupe = true;
  /// Drop self-loops; when false a self-loop is an error.
  bool drop_self_loops = true;
  /// Adds external ids 0..N-1 as nodes even if they have no edges.
  std::optional<NodeId> node_count;
};

namespace detail {

inline bool parse_id(std::string_view tok, ExternalId& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace detail

/// Reads "u v" lines. Blank lines and lines whose first non-blank character
/// is '#' are skipped. External ids are relabeled densely in ascending order.
inline Graph load_edge_list(std::istream& in, const LoadOptions& options = {}) {
  std::vector<std::pair<ExternalId, ExternalId>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    ExternalId ids[2];
    int count = 0;
    while (true) {
      while (!rest.empty() && detail::is_space(rest.front())) rest.remove_prefix(1);
      if (rest.empty()) break;
      if (count == 0 && rest.front() == '#') break;
      std::size_t len = 0;
      while (len < rest.size() && !detail::is_space(rest[len])) ++len;
      const std::string_view tok = rest.substr(0, len);
      rest.remove_prefix(len);
      if (count == 2) throw ParseError(lineno, "expected two node ids, found more");
      if (!detail::parse_id(tok, ids[count])) {
        throw ParseError(lineno, "invalid node id '" + std::string(tok) + "'");
      }
      ++count;
    }
    if (count == 0) continue;
    if (count != 2) throw ParseError(lineno, "expected two node ids, found one");
    if (ids[0] == ids[1] && !options.drop_self_loops) {
      throw ParseError(lineno, "self-loop on node " + std::to_string(ids[0]));
    }
    raw.emplace_back(ids[0], ids[1]);
  }
  if (in.bad()) throw IoError("read failure");

  std::vector<ExternalId> ids;
  ids.reserve(raw.size() * 2 + options.node_count.value_or(0));
  for (auto [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  if (options.node_count) {
    for (NodeId i = 0; i < *options.node_count; ++i) ids.push_back(i);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() >= kInvalidNode) throw ArgumentError("too many nodes");

  auto dense = [&](ExternalId id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) {
    NodeId u = dense(a), v = dense(b);
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }
  if (!options.dedupe) {
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      throw ArgumentError("duplicate edge " + std::to_string(ids[dup->first]) + " " +
                          std::to_string(ids[dup->second]));
    }
  }
  bool identity = true;
  for (std::size_t i = 0; i < ids.size() && identity; ++i) {
    identity = ids[i] == static_cast<ExternalId>(i);
  }
  const auto n = static_cast<NodeId>(ids.size());
  if (identity) ids.clear();
  return Graph::from_edges(n, edges, std::move(ids));
}

/// One "u<TAB>v" line per undirected edge, u < v in external ids, sorted.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  std::vector<std::pair<ExternalId, ExternalId>> lines;
  lines.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) {
    ExternalId a = g.external_id(u), b = g.external_id(v);
    if (a > b) std::swap(a, b);
    lines.emplace_back(a, b);
  }
  std::sort(lines.begin(), lines.end());
  for (auto [a, b] : lines) out << a << '\t' << b << '\n';
}

// ---------------------------------------------------------------------------
// Synthetic graphs

struct ErdosRenyi {
  NodeId n;
  double p;
};

/// Preferential attachment: a seed clique of attach+1 nodes, then each new
/// node links to `attach` distinct existing nodes with probability
/// proportional to their degree.
struct PowerlawBA {
  NodeId n;
  NodeId attach;
};

using SyntheticModel = std::variant<ErdosRenyi, PowerlawBA>;

namespace detail {

// Unbiased draw in [0, bound) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline Graph generate_synthetic(const SyntheticModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (const auto* er = std::get_if<ErdosRenyi>(&model)) {
    if (er->n < 1) throw ArgumentError("erdos_renyi requires n >= 1");
    if (!(er->p >= 0.0 && er->p <= 1.0)) throw ArgumentError("erdos_renyi requires 0 <= p <= 1");
    std::vector<Edge> edges;
    if (er->p > 0.0) {
      for (NodeId u = 0; u < er->n; ++u) {
        for (NodeId v = u + 1; v < er->n; ++v) {
          if (er->p >= 1.0 || detail::unit_double(rng) < er->p) edges.emplace_back(u, v);
        }
      }
    }
    return Graph::from_edges(er->n, edges);
  }
  const auto& ba = std::get<PowerlawBA>(model);
  if (ba.n < 1) throw ArgumentError("powerlaw_ba requires n >= 1");
  if (ba.attach < 1 || ba.attach >= ba.n) {
    throw ArgumentError("powerlaw_ba requires 1 <= attach_m < n");
  }
  const NodeId m = ba.attach;
  std::vector<Edge> edges;
  edges.reserve(std::size_t{m} * (ba.n - m - 1) + std::size_t{m} * (m + 1) / 2);
  // Each edge contributes both endpoints, so a uniform pick from this list
  // is a degree-proportional pick of a node.
  std::vector<NodeId> endpoints;
  endpoints.reserve(edges.capacity() * 2);
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  targets.reserve(m);
  for (NodeId v = m + 1; v < ba.n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[detail::uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(ba.n, edges);
}

}  // namespace dckcore
