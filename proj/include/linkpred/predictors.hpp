#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/linalg.hpp"
#include "linkpred/mpnn.hpp"
#include "linkpred/tensor.hpp"

namespace linkpred {

enum class Variant { GAE, NCN, NcnDiff, Ncn2, NCNC };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::GAE: return "gae";
    case Variant::NCN: return "ncn";
    case Variant::NcnDiff: return "ncn_diff";
    case Variant::Ncn2: return "ncn2";
    case Variant::NCNC: return "ncnc";
  }
  return "?";
}

inline Variant variant_from_name(const std::string& s) {
  if (s == "gae") return Variant::GAE;
  if (s == "ncn") return Variant::NCN;
  if (s == "ncn_diff") return Variant::NcnDiff;
  if (s == "ncn2") return Variant::Ncn2;
  if (s == "ncnc") return Variant::NCNC;
  throw std::invalid_argument("unknown variant: " + s);
}

// Completion probabilities are kept off the exact 0/1 endpoints so that
// hard common neighbors (weight exactly 1) stay distinguishable.
inline constexpr double kCompletionClamp = 1e-7;

struct PredictorConfig {
  Variant variant = Variant::NCN;
  int completion_iters = 1;       // K in NCNC-K; 0 degenerates to NCN
  bool detach_completion = false; // stop gradients through inner scores
  std::size_t mlp_hidden = 64;

  void validate() const {
    if (completion_iters < 0)
      throw std::invalid_argument("PredictorConfig: K >= 0");
    if (variant != Variant::GAE && mlp_hidden == 0)
      throw std::invalid_argument("PredictorConfig: zero MLP width");
  }
};

/// Full model: MPNN encoder plus the link MLP head. GAE has no head.
struct ModelParams {
  PredictorConfig predictor;
  MpnnParams mpnn;
  ad::Param mlp_w1, mlp_b1, mlp_w2, mlp_b2;  // z_dim -> hidden -> 1

  std::size_t feature_dim() const { return mpnn.out_dim(); }

  /// Width of the link representation z fed to the MLP.
  std::size_t z_dim() const {
    switch (predictor.variant) {
      case Variant::GAE: return 0;
      case Variant::NCN:
      case Variant::NCNC: return 2 * feature_dim();
      case Variant::NcnDiff:
      case Variant::Ncn2: return 3 * feature_dim();
    }
    return 0;
  }

  static ModelParams init(const MpnnConfig& mpnn_cfg,
                          const PredictorConfig& pred_cfg,
                          std::mt19937_64& rng) {
    pred_cfg.validate();
    ModelParams p;
    p.predictor = pred_cfg;
    p.mpnn = MpnnParams::init(mpnn_cfg, rng);
    if (pred_cfg.variant != Variant::GAE) {
      std::size_t zd = p.z_dim(), hd = pred_cfg.mlp_hidden;
      p.mlp_w1 = ad::Param(zd, hd);
      p.mlp_b1 = ad::Param(1, hd);
      p.mlp_w2 = ad::Param(hd, 1);
      p.mlp_b2 = ad::Param(1, 1);
      auto xavier = [&rng](ad::Param& w) {
        double limit = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
        std::uniform_real_distribution<double> u(-limit, limit);
        for (auto& x : w.value) x = u(rng);
      };
      xavier(p.mlp_w1);
      xavier(p.mlp_w2);
    }
    return p;
  }

  /// Fixed parameter order shared by the optimizer and the checkpoint codec.
  std::vector<ad::Param*> all_params() {
    std::vector<ad::Param*> out;
    for (std::size_t k = 0; k < mpnn.weights.size(); ++k) {
      out.push_back(&mpnn.weights[k]);
      out.push_back(&mpnn.biases[k]);
    }
    if (predictor.variant != Variant::GAE) {
      out.push_back(&mlp_w1);
      out.push_back(&mlp_b1);
      out.push_back(&mlp_w2);
      out.push_back(&mlp_b2);
    }
    return out;
  }
};

struct BoundModel {
  MpnnBound mpnn;
  ad::Tensor w1, b1, w2, b2;
};

inline BoundModel bind_model(ad::Tape& tape, ModelParams& params) {
  BoundModel b;
  b.mpnn = bind_mpnn(tape, params.mpnn);
  if (params.predictor.variant != Variant::GAE) {
    b.w1 = tape.leaf(params.mlp_w1);
    b.b1 = tape.leaf(params.mlp_b1);
    b.w2 = tape.leaf(params.mlp_w2);
    b.b2 = tape.leaf(params.mlp_b2);
  }
  return b;
}

namespace detail {

struct PoolPlan {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
};

inline void append_set(PoolPlan& plan, const NodeSet& s) {
  plan.indices.insert(plan.indices.end(), s.begin(), s.end());
  plan.offsets.push_back(plan.indices.size());
}

inline ad::Tensor mlp_logits(ad::Tensor z, const BoundModel& bound) {
  auto hidden = ad::relu(ad::add_row_bias(ad::matmul(z, bound.w1), bound.b1));
  return ad::add_row_bias(ad::matmul(hidden, bound.w2), bound.b2);
}

// Candidate plan for one completion level: hard common neighbors weighted 1,
// one-sided neighbors weighted by the inner model's probability for the
// missing edge. Candidates are the union of both neighborhoods minus the
// endpoints, in node order, so scores are exactly symmetric in (i, j).
struct CompletionPlan {
  PoolPlan pool;
  std::vector<std::int64_t> soft_slot;  // -1 for hard entries
  std::vector<Edge> inner_links;        // one per soft entry
};

inline CompletionPlan build_completion_plan(const Graph& g,
                                            std::span<const Edge> links) {
  CompletionPlan plan;
  for (auto [i, j] : links) {
    auto ni = g.neighbors(i);
    auto nj = g.neighbors(j);
    NodeSet uni;
    std::set_union(ni.begin(), ni.end(), nj.begin(), nj.end(),
                   std::back_inserter(uni));
    for (NodeId u : uni) {
      if (u == i || u == j) continue;
      bool in_i = std::binary_search(ni.begin(), ni.end(), u);
      bool in_j = std::binary_search(nj.begin(), nj.end(), u);
      plan.pool.indices.push_back(u);
      if (in_i && in_j) {
        plan.soft_slot.push_back(-1);
      } else if (in_j) {  // (i,u) unobserved
        plan.soft_slot.push_back(static_cast<std::int64_t>(plan.inner_links.size()));
        plan.inner_links.push_back({i, u});
      } else {  // (j,u) unobserved
        plan.soft_slot.push_back(static_cast<std::int64_t>(plan.inner_links.size()));
        plan.inner_links.push_back({j, u});
      }
    }
    plan.pool.offsets.push_back(plan.pool.indices.size());
  }
  return plan;
}

}  // namespace detail

/// Logits for a batch of target links against shared node representations.
/// `completion_iters` overrides the config's K (used by the recursion).
inline ad::Tensor score_logits(ad::Tape& tape, const Graph& g, ad::Tensor h,
                               std::span<const Edge> links,
                               const PredictorConfig& cfg,
                               const BoundModel& bound, int completion_iters) {
  std::vector<std::uint32_t> is, js;
  is.reserve(links.size());
  js.reserve(links.size());
  for (auto [i, j] : links) {
    is.push_back(i);
    js.push_back(j);
  }
  auto hi = ad::gather_rows(h, std::move(is));
  auto hj = ad::gather_rows(h, std::move(js));
  if (cfg.variant == Variant::GAE) return ad::dot_rows(hi, hj);

  ad::Tensor pooled;
  const bool completing =
      cfg.variant == Variant::NCNC && completion_iters > 0;
  if (completing) {
    auto plan = detail::build_completion_plan(g, links);
    ad::Tensor weights;
    if (plan.inner_links.empty()) {
      weights = ad::Tensor();  // all hard: plain ones
    } else {
      auto inner_logits = score_logits(tape, g, h, plan.inner_links, cfg,
                                       bound, completion_iters - 1);
      auto inner_probs = ad::clamp(ad::sigmoid(inner_logits), kCompletionClamp,
                                   1.0 - kCompletionClamp);
      if (cfg.detach_completion) inner_probs = ad::detach(inner_probs);
      weights = ad::mix_weights(tape, std::move(plan.soft_slot), inner_probs);
    }
    pooled = ad::weighted_pool_rows(h, std::move(plan.pool.offsets),
                                    std::move(plan.pool.indices), weights);
  } else {
    detail::PoolPlan plan;
    for (auto [i, j] : links) detail::append_set(plan, g.common_neighbors(i, j));
    pooled = ad::weighted_pool_rows(h, std::move(plan.offsets),
                                    std::move(plan.indices));
  }
  auto z = ad::concat_cols(ad::hadamard(hi, hj), pooled);
  if (cfg.variant == Variant::NcnDiff || cfg.variant == Variant::Ncn2) {
    detail::PoolPlan left, right;
    if (cfg.variant == Variant::NcnDiff) {
      for (auto [i, j] : links) {
        detail::append_set(left, g.neighbor_difference(i, j));
        detail::append_set(right, g.neighbor_difference(j, i));
      }
    } else {
      Graph g2 = power_graph(g, 2);
      for (auto [i, j] : links) {
        auto a2i = g2.neighbors(i);
        auto a2j = g2.neighbors(j);
        auto ni = g.neighbors(i);
        auto nj = g.neighbors(j);
        NodeSet cross1, cross2;
        std::set_intersection(a2i.begin(), a2i.end(), nj.begin(), nj.end(),
                              std::back_inserter(cross1));
        std::set_intersection(ni.begin(), ni.end(), a2j.begin(), a2j.end(),
                              std::back_inserter(cross2));
        detail::append_set(left, cross1);
        detail::append_set(right, cross2);
      }
    }
    auto pl = ad::weighted_pool_rows(h, std::move(left.offsets),
                                     std::move(left.indices));
    auto pr = ad::weighted_pool_rows(h, std::move(right.offsets),
                                     std::move(right.indices));
    // the two side pools are combined by elementwise sum, which keeps
    // score(i,j) == score(j,i)
    z = ad::concat_cols(z, ad::add(pl, pr));
  }
  return detail::mlp_logits(z, bound);
}

inline ad::Tensor score_logits(ad::Tape& tape, const Graph& g, ad::Tensor h,
                               std::span<const Edge> links,
                               const PredictorConfig& cfg,
                               const BoundModel& bound) {
  cfg.validate();
  int k = cfg.variant == Variant::NCNC ? cfg.completion_iters : 0;
  return score_logits(tape, g, h, links, cfg, bound, k);
}

/// Forward-only batch probabilities from fixed node representations.
inline std::vector<double> score_links(const Graph& g, const DenseMatrix& h,
                                       std::span<const Edge> links,
                                       ModelParams& params) {
  ad::Tape tape;
  tape.set_grad_enabled(false);
  auto ht = tape.constant(h);
  auto bound = bind_model(tape, params);
  auto logits = score_logits(tape, g, ht, links, params.predictor, bound);
  return ad::sigmoid(logits).value();
}

/// sigma(h_i . h_j), the embedding-only baseline.
inline double gae_score(const DenseMatrix& h, NodeId i, NodeId j) {
  double dot = 0.0;
  for (std::size_t k = 0; k < h.cols; ++k) dot += h.at(i, k) * h.at(j, k);
  return 1.0 / (1.0 + std::exp(-dot));
}

/// Pooled representation of the common neighbors; zero vector when the
/// intersection is empty.
inline std::vector<double> ncn_feature(const Graph& g, const DenseMatrix& h,
                                       NodeId i, NodeId j) {
  std::vector<double> out(h.cols, 0.0);
  for (NodeId u : g.common_neighbors(i, j))
    for (std::size_t k = 0; k < h.cols; ++k) out[k] += h.at(u, k);
  return out;
}

/// The extra pooled blocks of the ablation variants, in canonical order:
/// NcnDiff gives (pool over N(i)-N(j), pool over N(j)-N(i)); Ncn2 gives
/// (pool over N(i,A^2) ∩ N(j,A), pool over N(i,A) ∩ N(j,A^2)).
inline std::vector<double> ncn_variant_feature(const Graph& g,
                                               const DenseMatrix& h, NodeId i,
                                               NodeId j, Variant variant) {
  auto pool = [&h](const NodeSet& s) {
    std::vector<double> out(h.cols, 0.0);
    for (NodeId u : s)
      for (std::size_t k = 0; k < h.cols; ++k) out[k] += h.at(u, k);
    return out;
  };
  NodeSet first, second;
  if (variant == Variant::NcnDiff) {
    first = g.neighbor_difference(i, j);
    second = g.neighbor_difference(j, i);
  } else if (variant == Variant::Ncn2) {
    Graph g2 = power_graph(g, 2);
    auto a2i = g2.neighbors(i);
    auto a2j = g2.neighbors(j);
    auto ni = g.neighbors(i);
    auto nj = g.neighbors(j);
    std::set_intersection(a2i.begin(), a2i.end(), nj.begin(), nj.end(),
                          std::back_inserter(first));
    std::set_intersection(ni.begin(), ni.end(), a2j.begin(), a2j.end(),
                          std::back_inserter(second));
  } else {
    throw std::invalid_argument("ncn_variant_feature: NcnDiff or Ncn2 only");
  }
  auto a = pool(first);
  auto b = pool(second);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

namespace detail {

inline double score_one(const Graph& g, const DenseMatrix& h, Edge e,
                        ModelParams& params, Variant variant, int iters) {
  PredictorConfig cfg = params.predictor;
  cfg.variant = variant;
  cfg.completion_iters = iters;
  ad::Tape tape;
  tape.set_grad_enabled(false);
  auto ht = tape.constant(h);
  auto bound = bind_model(tape, params);
  std::vector<Edge> links{e};
  auto logits = score_logits(tape, g, ht, links, cfg, bound);
  return ad::sigmoid(logits).value()[0];
}

}  // namespace detail

inline double ncn_score(const Graph& g, const DenseMatrix& h, NodeId i,
                        NodeId j, ModelParams& params) {
  return detail::score_one(g, h, {i, j}, params, Variant::NCN, 0);
}

/// NCNC-K probability; K = 0 runs the identical NCN code path.
inline double ncnc_score(const Graph& g, const DenseMatrix& h, NodeId i,
                         NodeId j, ModelParams& params, int iters) {
  if (iters < 0) throw std::invalid_argument("ncnc_score: K >= 0");
  return detail::score_one(g, h, {i, j}, params, Variant::NCNC, iters);
}

/// Soft common-neighbor weights for a target pair.
struct CompletionWeights {
  std::vector<std::pair<NodeId, double>> weights;  // sorted by node id
};

/// The four-case completion rule over candidates u in N(i) ∪ N(j) minus the
/// endpoints: both-linked -> 1; u in N(j)-N(i) -> scorer(i,u); u in
/// N(i)-N(j) -> scorer(j,u); everything else is omitted (weight 0). Scorer
/// probabilities are clamped below 1 so hard neighbors stay exact.
inline CompletionWeights completion_probs(
    const Graph& g, NodeId i, NodeId j,
    const std::function<double(NodeId, NodeId)>& scorer) {
  CompletionWeights out;
  auto ni = g.neighbors(i);
  auto nj = g.neighbors(j);
  NodeSet uni;
  std::set_union(ni.begin(), ni.end(), nj.begin(), nj.end(),
                 std::back_inserter(uni));
  for (NodeId u : uni) {
    if (u == i || u == j) continue;
    bool in_i = std::binary_search(ni.begin(), ni.end(), u);
    bool in_j = std::binary_search(nj.begin(), nj.end(), u);
    double p;
    if (in_i && in_j) {
      p = 1.0;
    } else {
      double raw = in_j ? scorer(i, u) : scorer(j, u);
      p = std::clamp(raw, 0.0, 1.0 - kCompletionClamp);
    }
    out.weights.push_back({u, p});
  }
  return out;
}

}  // namespace linkpred
