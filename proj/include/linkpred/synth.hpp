#pragma once

// Seeded synthetic graph generators used by the benchmarks, the analysis
// examples, and desk-scale experiments.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/linalg.hpp"

namespace linkpred {

/// Disjoint complete-bipartite K_{d,d} blocks. Every node has degree d;
/// a same-side pair has exactly d common neighbors, a cross-side edge has
/// none. Handy for degree-scaling benchmarks.
inline Graph bipartite_blocks(std::size_t num_blocks, std::size_t d) {
  std::vector<Edge> edges;
  edges.reserve(num_blocks * d * d);
  const std::size_t block_size = 2 * d;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    NodeId base = static_cast<NodeId>(b * block_size);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        edges.push_back({static_cast<NodeId>(base + i),
                         static_cast<NodeId>(base + d + j)});
  }
  return Graph::from_edge_list(edges, num_blocks * block_size);
}

/// Preferential-attachment edges in creation order: each new node attaches
/// `edges_per_node` links to existing nodes with probability proportional
/// to degree. The returned order doubles as an edge timestamp.
inline std::vector<Edge> preferential_attachment(std::size_t n,
                                                 std::size_t edges_per_node,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::vector<NodeId> endpoint_pool;  // node repeated once per incident edge
  std::size_t seed_nodes = edges_per_node + 1;
  for (NodeId u = 0; u < seed_nodes; ++u)
    for (NodeId v = u + 1; v < seed_nodes; ++v) {
      edges.push_back({u, v});
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  for (NodeId u = static_cast<NodeId>(seed_nodes); u < n; ++u) {
    std::vector<NodeId> chosen;
    while (chosen.size() < edges_per_node) {
      NodeId v = endpoint_pool[rng() % endpoint_pool.size()];
      if (v == u) continue;
      if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
      chosen.push_back(v);
    }
    for (NodeId v : chosen) {
      edges.push_back({u, v});
      endpoint_pool.push_back(u);
      endpoint_pool.push_back(v);
    }
  }
  return edges;
}

/// Spec of a clustered, attributed graph with two edge mechanisms:
/// triadic within-community edges (common-neighbor signal) and
/// feature-driven cross edges between same-topic nodes (attribute signal).
/// community_signal > 0 additionally blends a per-community prototype into
/// the features, making community membership partially visible to
/// attribute-based models.
struct ClusteredGraphSpec {
  std::size_t nodes = 2708;
  std::size_t community_size = 10;
  double within_degree = 3.0;   // expected within-community degree
  double cross_degree = 0.9;    // expected same-topic cross edges per node
  std::size_t topics = 8;
  std::size_t feature_dim = 16;
  double feature_noise = 0.4;
  double community_signal = 0.0;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  std::vector<Edge> edges;
  DenseMatrix features;
  std::size_t nodes = 0;
};

inline SyntheticDataset make_clustered_graph(const ClusteredGraphSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = spec.nodes;

  // communities partition the nodes; topics are assigned independently
  std::vector<std::uint32_t> community(n), topic(n);
  for (std::size_t v = 0; v < n; ++v) {
    community[v] = static_cast<std::uint32_t>(v / spec.community_size);
    topic[v] = static_cast<std::uint32_t>(rng() % spec.topics);
  }

  DenseMatrix prototypes(spec.topics, spec.feature_dim);
  for (auto& x : prototypes.data) x = gauss(rng);
  const std::size_t communities = (n + spec.community_size - 1) / spec.community_size;
  DenseMatrix community_proto(spec.community_signal > 0.0 ? communities : 0,
                              spec.feature_dim);
  for (auto& x : community_proto.data) x = gauss(rng);
  DenseMatrix features(n, spec.feature_dim);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < spec.feature_dim; ++k) {
      double f = prototypes.at(topic[v], k) + spec.feature_noise * gauss(rng);
      if (spec.community_signal > 0.0)
        f += spec.community_signal * community_proto.at(community[v], k);
      features.at(v, k) = f;
    }

  std::vector<Edge> edges;
  // within-community pairs
  const std::size_t s = spec.community_size;
  double p_in = std::min(1.0, spec.within_degree / static_cast<double>(s - 1));
  for (std::size_t base = 0; base < n; base += s) {
    std::size_t stop = std::min(base + s, n);
    for (std::size_t u = base; u < stop; ++u)
      for (std::size_t v = u + 1; v < stop; ++v)
        if (coin(rng) < p_in)
          edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  // same-topic cross edges, sampled by rejection
  std::size_t cross_target =
      static_cast<std::size_t>(spec.cross_degree * static_cast<double>(n) / 2.0);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::size_t made = 0, guard = 0;
  while (made < cross_target && guard < 200 * cross_target + 1000) {
    ++guard;
    NodeId u = pick(rng), v = pick(rng);
    if (u == v || topic[u] != topic[v]) continue;
    if (community[u] == community[v]) continue;
    edges.push_back({u, v});
    ++made;
  }
  SyntheticDataset out;
  out.nodes = n;
  out.features = std::move(features);
  // collapse duplicates through graph construction
  Graph g = Graph::from_edge_list(edges, n);
  for (auto& [e, w] : g.edge_list()) out.edges.push_back(e);
  return out;
}

}  // namespace linkpred
