#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace linkpred {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

/// Immutable undirected graph in CSR form.
///
/// Each undirected edge {u,v} is stored as two arcs (u->v and v->u) with
/// equal weight. Neighbor lists are strictly increasing and never contain
/// the node itself. Safe to share across concurrent readers.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an undirected edge list.
  ///
  /// Takes the symmetric closure, collapses duplicate edges by summing
  /// their weights, and drops self-loops (the drop count is reported via
  /// `dropped_self_loops` when non-null). Unweighted input edges count 1.0.
  static Graph from_edge_list(const std::vector<Edge>& pairs, std::size_t n,
                              const std::vector<double>* weights = nullptr,
                              std::size_t* dropped_self_loops = nullptr) {
    if (weights && weights->size() != pairs.size())
      throw std::invalid_argument("from_edge_list: weights size mismatch");
    std::size_t loops = 0;
    std::vector<std::pair<Edge, double>> canon;
    canon.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [u, v] = pairs[k];
      if (u >= n || v >= n)
        throw std::out_of_range("from_edge_list: node id " +
                                std::to_string(std::max(u, v)) + " >= n=" +
                                std::to_string(n));
      if (u == v) {
        ++loops;
        continue;
      }
      if (u > v) std::swap(u, v);
      canon.push_back({{u, v}, weights ? (*weights)[k] : 1.0});
    }
    if (dropped_self_loops) *dropped_self_loops = loops;
    std::sort(canon.begin(), canon.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // Collapse duplicates, summing weights.
    std::vector<std::pair<Edge, double>> edges;
    edges.reserve(canon.size());
    for (const auto& e : canon) {
      if (!edges.empty() && edges.back().first == e.first)
        edges.back().second += e.second;
      else
        edges.push_back(e);
    }
    Graph g;
    g.n_ = n;
    g.m_ = edges.size();
    std::vector<std::size_t> deg(n, 0);
    for (const auto& [e, w] : edges) {
      ++deg[e.first];
      ++deg[e.second];
    }
    g.row_offsets_.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u)
      g.row_offsets_[u + 1] = g.row_offsets_[u] + deg[u];
    g.col_indices_.resize(2 * g.m_);
    g.edge_weights_.resize(2 * g.m_);
    std::vector<std::size_t> cursor(g.row_offsets_.begin(),
                                    g.row_offsets_.end() - 1);
    for (const auto& [e, w] : edges) {
      g.col_indices_[cursor[e.first]] = e.second;
      g.edge_weights_[cursor[e.first]++] = w;
      g.col_indices_[cursor[e.second]] = e.first;
      g.edge_weights_[cursor[e.second]++] = w;
    }
    // Canonical ordering made each row sorted already; edges were sorted by
    // (min,max), so arcs of row u from the "first" slot arrive in increasing
    // v, but arcs from the "second" slot interleave. Sort rows to be safe.
    for (std::size_t u = 0; u < n; ++u) g.sort_row(u);
    return g;
  }

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return m_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    check_node(u);
    return {col_indices_.data() + row_offsets_[u],
            col_indices_.data() + row_offsets_[u + 1]};
  }

  std::span<const double> neighbor_weights(NodeId u) const {
    check_node(u);
    return {edge_weights_.data() + row_offsets_[u],
            edge_weights_.data() + row_offsets_[u + 1]};
  }

  std::size_t degree(NodeId u) const {
    check_node(u);
    return row_offsets_[u + 1] - row_offsets_[u];
  }

  /// Sum of incident edge weights.
  double weighted_degree(NodeId u) const {
    double s = 0.0;
    for (double w : neighbor_weights(u)) s += w;
    return s;
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    check_node(v);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Weight of edge {u,v}, or 0 if absent.
  double edge_weight(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    check_node(v);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0.0;
    return edge_weights_[row_offsets_[u] + (it - nb.begin())];
  }

  /// Sorted intersection N(i) ∩ N(j) via linear merge.
  NodeSet common_neighbors(NodeId i, NodeId j) const {
    auto a = neighbors(i);
    auto b = neighbors(j);
    NodeSet out;
    out.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
  }

  /// Sorted difference N(i) − N(j).
  NodeSet neighbor_difference(NodeId i, NodeId j) const {
    auto a = neighbors(i);
    auto b = neighbors(j);
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
    return out;
  }

  /// Each undirected edge once, as (u,v) with u < v, plus its weight.
  std::vector<std::pair<Edge, double>> edge_list() const {
    std::vector<std::pair<Edge, double>> out;
    out.reserve(m_);
    for (NodeId u = 0; u < n_; ++u) {
      auto nb = neighbors(u);
      auto wt = neighbor_weights(u);
      for (std::size_t k = 0; k < nb.size(); ++k)
        if (u < nb[k]) out.push_back({{u, nb[k]}, wt[k]});
    }
    return out;
  }

  /// New graph without the listed undirected edges. Absent edges are
  /// tolerated; `removed` reports how many listed edges actually existed.
  Graph remove_edges(const std::vector<Edge>& batch,
                     std::size_t* removed = nullptr) const {
    std::vector<Edge> kill;
    kill.reserve(batch.size());
    for (auto [u, v] : batch) {
      check_node(u);
      check_node(v);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      kill.push_back({u, v});
    }
    std::sort(kill.begin(), kill.end());
    kill.erase(std::unique(kill.begin(), kill.end()), kill.end());
    std::size_t hits = 0;
    std::vector<Edge> pairs;
    std::vector<double> weights;
    pairs.reserve(m_);
    weights.reserve(m_);
    for (const auto& [e, w] : edge_list()) {
      if (std::binary_search(kill.begin(), kill.end(), e)) {
        ++hits;
        continue;
      }
      pairs.push_back(e);
      weights.push_back(w);
    }
    if (removed) *removed = hits;
    return from_edge_list(pairs, n_, &weights);
  }

 private:
  void check_node(NodeId u) const {
    if (u >= n_)
      throw std::out_of_range("node id " + std::to_string(u) +
                              " out of range (n=" + std::to_string(n_) + ")");
  }

  void sort_row(std::size_t u) {
    std::size_t lo = row_offsets_[u], hi = row_offsets_[u + 1];
    std::vector<std::pair<NodeId, double>> row;
    row.reserve(hi - lo);
    for (std::size_t k = lo; k < hi; ++k)
      row.push_back({col_indices_[k], edge_weights_[k]});
    std::sort(row.begin(), row.end());
    for (std::size_t k = lo; k < hi; ++k) {
      col_indices_[k] = row[k - lo].first;
      edge_weights_[k] = row[k - lo].second;
    }
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<NodeId> col_indices_;
  std::vector<double> edge_weights_;
};

/// Graph of A^l: arc (u,v) exists iff there is a length-l walk u->v, with
/// weight equal to the (A^l)_{uv} walk count (weighted walks for weighted
/// graphs). Self-walk counts (the diagonal of A^l) are dropped from the
/// neighbor lists; pass `diagonal` to retrieve them.
inline Graph power_graph(const Graph& g, int l,
                         std::vector<double>* diagonal = nullptr) {
  if (l < 1) throw std::invalid_argument("power_graph: l must be >= 1");
  const std::size_t n = g.node_count();
  if (diagonal) diagonal->assign(n, 0.0);
  if (l == 1) {
    return g;  // weight-preserving identity; diagonal of A is all zero
  }
  // Row-by-row sparse accumulation of A^l = A^(l-1) * A.
  // Current power kept as adjacency lists of (neighbor, weight).
  std::vector<std::vector<std::pair<NodeId, double>>> cur(n);
  for (NodeId u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    auto wt = g.neighbor_weights(u);
    cur[u].reserve(nb.size());
    for (std::size_t k = 0; k < nb.size(); ++k)
      cur[u].push_back({nb[k], wt[k]});
  }
  std::vector<double> acc(n, 0.0);
  std::vector<NodeId> touched;
  for (int step = 1; step < l; ++step) {
    std::vector<std::vector<std::pair<NodeId, double>>> next(n);
    for (NodeId u = 0; u < n; ++u) {
      touched.clear();
      for (auto [v, w] : cur[u]) {
        auto nb = g.neighbors(v);
        auto wt = g.neighbor_weights(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
          NodeId t = nb[k];
          if (acc[t] == 0.0) touched.push_back(t);
          acc[t] += w * wt[k];
        }
      }
      std::sort(touched.begin(), touched.end());
      next[u].reserve(touched.size());
      for (NodeId t : touched) {
        next[u].push_back({t, acc[t]});
        acc[t] = 0.0;
      }
    }
    cur.swap(next);
  }
  std::vector<Edge> pairs;
  std::vector<double> weights;
  for (NodeId u = 0; u < n; ++u) {
    for (auto [v, w] : cur[u]) {
      if (v == u) {
        if (diagonal) (*diagonal)[u] = w;
        continue;
      }
      if (u < v) {
        pairs.push_back({u, v});
        weights.push_back(w);
      }
    }
  }
  return Graph::from_edge_list(pairs, n, &weights);
}

/// BFS frontier at exact distance l from u.
inline NodeSet shortest_path_neighborhood(const Graph& g, NodeId u, int l) {
  if (l < 1)
    throw std::invalid_argument("shortest_path_neighborhood: l must be >= 1");
  const std::size_t n = g.node_count();
  if (u >= n) throw std::out_of_range("shortest_path_neighborhood: bad node");
  std::vector<int> dist(n, -1);
  dist[u] = 0;
  std::vector<NodeId> frontier{u};
  for (int depth = 1; depth <= l && !frontier.empty(); ++depth) {
    std::vector<NodeId> next;
    for (NodeId v : frontier)
      for (NodeId w : g.neighbors(v))
        if (dist[w] < 0) {
          dist[w] = depth;
          next.push_back(w);
        }
    frontier = std::move(next);
  }
  NodeSet out;
  for (NodeId v = 0; v < n; ++v)
    if (dist[v] == l) out.push_back(v);
  return out;
}

/// N_{l1}(u, A^{l2}): exact-distance-l1 frontier in the l2-th power graph.
inline NodeSet general_neighborhood(const Graph& g, NodeId u, int l1, int l2) {
  if (l1 < 1 || l2 < 1)
    throw std::invalid_argument("general_neighborhood: l parameters >= 1");
  if (l1 == 1 && l2 == 1) {
    auto nb = g.neighbors(u);
    return NodeSet(nb.begin(), nb.end());
  }
  if (l2 == 1) return shortest_path_neighborhood(g, u, l1);
  Graph p = power_graph(g, l2);
  return shortest_path_neighborhood(p, u, l1);
}

}  // namespace linkpred
