#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "linkpred/graph.hpp"

namespace linkpred {

enum class Heuristic { CN, RA, AA };

/// Direct CN / RA / AA score over the sorted common-neighbor intersection.
/// RA sums 1/d(u), AA sums 1/ln d(u); a common neighbor always has degree
/// >= 2, so both denominators are safe.
inline double heuristic_score(const Graph& g, NodeId i, NodeId j,
                              Heuristic kind) {
  double s = 0.0;
  for (NodeId u : g.common_neighbors(i, j)) {
    switch (kind) {
      case Heuristic::CN:
        s += 1.0;
        break;
      case Heuristic::RA:
        s += 1.0 / static_cast<double>(g.degree(u));
        break;
      case Heuristic::AA:
        s += 1.0 / std::log(static_cast<double>(g.degree(u)));
        break;
    }
  }
  return s;
}

enum class SetOp { Intersection, LeftDifference, RightDifference };
enum class WeightFn { ConstantOne, RawWeight, Custom };
enum class NodeFn { ConstantOne, InverseDegree, InverseLogDegree, Custom };

/// A point in the general pairwise-feature space: neighborhood selectors
/// for both endpoints, a set operator, an edge-weight function g and a
/// node-degree function f. Table-style presets below reproduce the
/// classical heuristics.
struct PairwiseConfig {
  int left_l1 = 1, left_l2 = 1;
  int right_l1 = 1, right_l2 = 1;
  SetOp set_op = SetOp::Intersection;
  WeightFn weight_fn = WeightFn::ConstantOne;
  NodeFn node_fn = NodeFn::ConstantOne;
  std::function<double(double)> custom_weight;  // used when weight_fn == Custom
  std::function<double(double)> custom_node;    // used when node_fn == Custom

  static PairwiseConfig cn_preset() { return {}; }
  static PairwiseConfig ra_preset() {
    PairwiseConfig c;
    c.node_fn = NodeFn::InverseDegree;
    return c;
  }
  static PairwiseConfig aa_preset() {
    PairwiseConfig c;
    c.node_fn = NodeFn::InverseLogDegree;
    return c;
  }

  void validate() const {
    if (left_l1 < 1 || left_l2 < 1 || right_l1 < 1 || right_l2 < 1)
      throw std::invalid_argument("PairwiseConfig: l parameters must be >= 1");
    if (weight_fn == WeightFn::Custom && !custom_weight)
      throw std::invalid_argument("PairwiseConfig: missing custom weight fn");
    if (node_fn == NodeFn::Custom && !custom_node)
      throw std::invalid_argument("PairwiseConfig: missing custom node fn");
  }
};

namespace detail {

inline double apply_weight(const PairwiseConfig& cfg, double raw) {
  switch (cfg.weight_fn) {
    case WeightFn::ConstantOne:
      return 1.0;
    case WeightFn::RawWeight:
      return raw;
    case WeightFn::Custom:
      return cfg.custom_weight(raw);
  }
  return 1.0;
}

inline double apply_node(const PairwiseConfig& cfg, double degree) {
  switch (cfg.node_fn) {
    case NodeFn::ConstantOne:
      return 1.0;
    case NodeFn::InverseDegree:
      return 1.0 / degree;
    case NodeFn::InverseLogDegree:
      return 1.0 / std::log(degree);
    case NodeFn::Custom:
      return cfg.custom_node(degree);
  }
  return 1.0;
}

}  // namespace detail

/// The general pairwise feature
///   sum over u in N_{l1}^{l2}(i) (+) N_{l1'}^{l2'}(j) of
///     g(A^{l2}_{iu}) * g(A^{l2'}_{ju}) * f(d(u)),
/// where (+) is the configured set operator. For difference operators the
/// excluded side contributes no g-factor (treated as 1). Degrees d(u) are
/// taken in the base graph.
inline double general_pairwise(const Graph& g, NodeId i, NodeId j,
                               const PairwiseConfig& cfg) {
  cfg.validate();
  const Graph left_power =
      cfg.left_l2 == 1 ? g : power_graph(g, cfg.left_l2);
  const Graph right_power =
      cfg.right_l2 == 1 ? g : power_graph(g, cfg.right_l2);
  NodeSet left = cfg.left_l1 == 1
                     ? NodeSet(left_power.neighbors(i).begin(),
                               left_power.neighbors(i).end())
                     : shortest_path_neighborhood(left_power, i, cfg.left_l1);
  NodeSet right =
      cfg.right_l1 == 1
          ? NodeSet(right_power.neighbors(j).begin(),
                    right_power.neighbors(j).end())
          : shortest_path_neighborhood(right_power, j, cfg.right_l1);
  NodeSet combined;
  switch (cfg.set_op) {
    case SetOp::Intersection:
      std::set_intersection(left.begin(), left.end(), right.begin(),
                            right.end(), std::back_inserter(combined));
      break;
    case SetOp::LeftDifference:
      std::set_difference(left.begin(), left.end(), right.begin(), right.end(),
                          std::back_inserter(combined));
      break;
    case SetOp::RightDifference:
      std::set_difference(right.begin(), right.end(), left.begin(), left.end(),
                          std::back_inserter(combined));
      break;
  }
  const bool use_left = cfg.set_op != SetOp::RightDifference;
  const bool use_right = cfg.set_op != SetOp::LeftDifference;
  double s = 0.0;
  for (NodeId u : combined) {
    double gl = use_left ? detail::apply_weight(cfg, left_power.edge_weight(i, u))
                         : 1.0;
    double gr = use_right
                    ? detail::apply_weight(cfg, right_power.edge_weight(j, u))
                    : 1.0;
    s += gl * gr * detail::apply_node(cfg, static_cast<double>(g.degree(u)));
  }
  return s;
}

/// Hyperparameters of the decayed high-order overlap score.
struct NeoGnnConfig {
  int max_hop = 2;       // l
  double beta = 0.5;     // decay, in [0, 1]
  NodeFn node_fn = NodeFn::ConstantOne;
  std::function<double(double)> custom_node;

  void validate() const {
    if (max_hop < 1) throw std::invalid_argument("NeoGnnConfig: l >= 1");
    if (beta < 0.0 || beta > 1.0)
      throw std::invalid_argument("NeoGnnConfig: beta in [0, 1]");
    if (node_fn == NodeFn::Custom && !custom_node)
      throw std::invalid_argument("NeoGnnConfig: missing custom node fn");
  }
};

/// Decayed high-order overlap score with the power graphs computed once;
/// use this when scoring many links of the same graph.
class NeoGnnScorer {
 public:
  NeoGnnScorer(const Graph& g, NeoGnnConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    powers_.reserve(cfg_.max_hop);
    powers_.push_back(g);
    for (int l = 2; l <= cfg_.max_hop; ++l)
      powers_.push_back(power_graph(g, l));
    nodecfg_.node_fn = cfg_.node_fn;
    nodecfg_.custom_node = cfg_.custom_node;
  }

  /// s(i,j,A) = sum_{l1,l2=1..l} beta^(l1+l2-2) * z_{l1,l2}, where z pools
  /// f(d(u)) weighted by walk counts A^{l1}_{iu} A^{l2}_{ju} over the
  /// overlap of the A^l-existence neighborhoods. beta^0 = 1 even when
  /// beta = 0.
  double operator()(NodeId i, NodeId j) const {
    const Graph& base = powers_.front();
    double s = 0.0;
    for (int l1 = 1; l1 <= cfg_.max_hop; ++l1) {
      for (int l2 = 1; l2 <= cfg_.max_hop; ++l2) {
        const Graph& pl = powers_[l1 - 1];
        const Graph& pr = powers_[l2 - 1];
        auto a = pl.neighbors(i);
        auto b = pr.neighbors(j);
        NodeSet overlap;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(overlap));
        double z = 0.0;
        for (NodeId u : overlap)
          z += pl.edge_weight(i, u) * pr.edge_weight(j, u) *
               detail::apply_node(nodecfg_, static_cast<double>(base.degree(u)));
        int e = l1 + l2 - 2;
        double decay = e == 0 ? 1.0 : std::pow(cfg_.beta, e);
        s += decay * z;
      }
    }
    return s;
  }

 private:
  NeoGnnConfig cfg_;
  PairwiseConfig nodecfg_;  // reuses the f dispatch
  std::vector<Graph> powers_;
};

inline double neo_gnn_feature(const Graph& g, NodeId i, NodeId j,
                              const NeoGnnConfig& cfg) {
  return NeoGnnScorer(g, cfg)(i, j);
}

struct BuddyConfig {
  int max_hop = 1;  // k

  void validate() const {
    if (max_hop < 1) throw std::invalid_argument("BuddyConfig: k >= 1");
  }
};

/// Exact shell-overlap/difference counts: k^2 overlaps a_{l1,l2} row-major,
/// then b_l(i,j) for l=1..k, then b_l(j,i). Shells are exact-shortest-path
/// neighborhoods N_l(., A).
inline std::vector<double> buddy_features(const Graph& g, NodeId i, NodeId j,
                                          const BuddyConfig& cfg) {
  cfg.validate();
  const int k = cfg.max_hop;
  std::vector<NodeSet> shell_i(k), shell_j(k);
  for (int l = 1; l <= k; ++l) {
    shell_i[l - 1] = shortest_path_neighborhood(g, i, l);
    shell_j[l - 1] = shortest_path_neighborhood(g, j, l);
  }
  auto union_all = [](const std::vector<NodeSet>& shells) {
    NodeSet all;
    for (const auto& s : shells) {
      NodeSet merged;
      std::set_union(all.begin(), all.end(), s.begin(), s.end(),
                     std::back_inserter(merged));
      all = std::move(merged);
    }
    return all;
  };
  NodeSet union_i = union_all(shell_i);
  NodeSet union_j = union_all(shell_j);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k) * k + 2 * k);
  for (int l1 = 1; l1 <= k; ++l1)
    for (int l2 = 1; l2 <= k; ++l2) {
      NodeSet overlap;
      std::set_intersection(shell_i[l1 - 1].begin(), shell_i[l1 - 1].end(),
                            shell_j[l2 - 1].begin(), shell_j[l2 - 1].end(),
                            std::back_inserter(overlap));
      out.push_back(static_cast<double>(overlap.size()));
    }
  for (int l = 1; l <= k; ++l) {
    NodeSet diff;
    std::set_difference(shell_i[l - 1].begin(), shell_i[l - 1].end(),
                        union_j.begin(), union_j.end(),
                        std::back_inserter(diff));
    out.push_back(static_cast<double>(diff.size()));
  }
  for (int l = 1; l <= k; ++l) {
    NodeSet diff;
    std::set_difference(shell_j[l - 1].begin(), shell_j[l - 1].end(),
                        union_i.begin(), union_i.end(),
                        std::back_inserter(diff));
    out.push_back(static_cast<double>(diff.size()));
  }
  return out;
}

}  // namespace linkpred
