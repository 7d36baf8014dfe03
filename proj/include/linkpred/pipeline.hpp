#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/metrics.hpp"
#include "linkpred/mpnn.hpp"
#include "linkpred/predictors.hpp"
#include "linkpred/tensor.hpp"

namespace linkpred {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment accumulators mirroring the parameter list.
struct AdamState {
  std::vector<std::vector<double>> m, v;
  std::size_t step = 0;

  static AdamState init(const std::vector<ad::Param*>& params) {
    AdamState s;
    for (auto* p : params) {
      s.m.emplace_back(p->size(), 0.0);
      s.v.emplace_back(p->size(), 0.0);
    }
    return s;
  }
};

/// Standard bias-corrected Adam update from the gradients stored in the
/// parameters.
inline void adam_step(const std::vector<ad::Param*>& params, AdamState& state,
                      const AdamConfig& cfg) {
  if (params.size() != state.m.size())
    throw std::invalid_argument("adam_step: state does not mirror params");
  ++state.step;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& param = *params[p];
    for (std::size_t k = 0; k < param.size(); ++k) {
      double g = param.grad[k];
      state.m[p][k] = cfg.beta1 * state.m[p][k] + (1.0 - cfg.beta1) * g;
      state.v[p][k] = cfg.beta2 * state.v[p][k] + (1.0 - cfg.beta2) * g * g;
      double mhat = state.m[p][k] / bc1;
      double vhat = state.v[p][k] / bc2;
      param.value[k] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

/// Uniformly sampled distinct non-edges (u != v, (u,v) not in E),
/// deterministic under the seed. Rejection sampling with a membership check
/// per draw.
inline std::vector<Edge> sample_negatives(const Graph& g, std::size_t count,
                                          std::uint64_t seed) {
  const std::size_t n = g.node_count();
  const std::size_t total_pairs = n * (n - 1) / 2;
  if (count == 0) return {};
  if (n < 2 || g.edge_count() >= total_pairs)
    throw std::runtime_error("sample_negatives: graph has no non-edges");
  if (count > total_pairs - g.edge_count())
    throw std::runtime_error("sample_negatives: not enough non-edges");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<Edge> out;
  std::vector<Edge> seen;
  out.reserve(count);
  while (out.size() < count) {
    NodeId u = pick(rng), v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (g.has_edge(u, v)) continue;
    Edge e{u, v};
    auto it = std::lower_bound(seen.begin(), seen.end(), e);
    if (it != seen.end() && *it == e) continue;
    seen.insert(it, e);
    out.push_back(e);
  }
  return out;
}

/// The training-time intervention: remove the whole batch of target links
/// from the input graph. Disabled, it returns the graph unchanged.
inline Graph tlr_batch(const Graph& g, const std::vector<Edge>& batch,
                       bool enabled = true) {
  if (!enabled) return g;
  return g.remove_edges(batch);
}

struct TrainConfig {
  // model
  Variant variant = Variant::NCN;
  int completion_iters = 1;
  bool detach_completion = false;
  int mpnn_layers = 2;
  std::size_t hidden_dim = 64;
  std::size_t mlp_hidden = 64;
  Propagation propagation = Propagation::SymNorm;
  // optimization
  int epochs = 100;
  std::size_t batch_size = 512;
  AdamConfig adam;
  int neg_ratio = 1;
  std::uint64_t seed = 1;
  bool tlr_enabled = true;
  // NCNC trains its completion scorer first: this many leading epochs run
  // with completion off (plain NCN), the rest with completion active.
  // -1 picks epochs/2 automatically; ignored for other variants.
  int completion_warmup = -1;

  void validate() const {
    if (epochs < 1 || epochs > 100)
      throw std::invalid_argument("TrainConfig: epochs in [1, 100]");
    if (adam.lr <= 0.0) throw std::invalid_argument("TrainConfig: lr > 0");
    if (neg_ratio < 1) throw std::invalid_argument("TrainConfig: neg_ratio >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size >= 1");
    if (completion_warmup > epochs)
      throw std::invalid_argument("TrainConfig: warmup exceeds epochs");
  }

  int warmup_epochs() const {
    if (variant != Variant::NCNC || completion_iters == 0) return 0;
    return completion_warmup < 0 ? epochs / 2 : completion_warmup;
  }

  ModelParams init_model(std::size_t in_dim, std::mt19937_64& rng) const {
    MpnnConfig mcfg;
    mcfg.layers = mpnn_layers;
    mcfg.in_dim = in_dim;
    mcfg.hidden_dim = hidden_dim;
    mcfg.propagation = propagation;
    PredictorConfig pcfg;
    pcfg.variant = variant;
    pcfg.completion_iters = completion_iters;
    pcfg.detach_completion = detach_completion;
    pcfg.mlp_hidden = mlp_hidden;
    return ModelParams::init(mcfg, pcfg, rng);
  }
};

/// One pass over the training edges: per minibatch, remove the batch from
/// the graph (TLR), run the MPNN once on the reduced graph, score batch
/// positives plus freshly sampled negatives, and take an Adam step on the
/// mean BCE. Returns the example-weighted mean loss.
inline double train_epoch(const Graph& g_train, const DenseMatrix& x,
                          ModelParams& params, AdamState& adam,
                          const TrainConfig& cfg, int epoch = 0) {
  cfg.validate();
  auto listed = g_train.edge_list();
  std::vector<Edge> positives;
  positives.reserve(listed.size());
  for (auto& [e, w] : listed) positives.push_back(e);
  if (positives.empty())
    throw std::invalid_argument("train_epoch: no training edges");
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL +
                      static_cast<std::uint64_t>(epoch));
  std::shuffle(positives.begin(), positives.end(), rng);

  auto param_ptrs = params.all_params();
  double loss_sum = 0.0;
  std::size_t example_count = 0;
  for (std::size_t start = 0; start < positives.size();
       start += cfg.batch_size) {
    std::size_t stop = std::min(start + cfg.batch_size, positives.size());
    std::vector<Edge> batch(positives.begin() + start,
                            positives.begin() + stop);
    Graph reduced = tlr_batch(g_train, batch, cfg.tlr_enabled);
    if (cfg.tlr_enabled)
      for (auto [u, v] : batch)
        if (reduced.has_edge(u, v))
          throw std::logic_error("train_epoch: TLR left a batch edge behind");

    std::vector<Edge> negatives = sample_negatives(
        g_train, batch.size() * static_cast<std::size_t>(cfg.neg_ratio),
        rng());
    std::vector<Edge> scored = batch;
    scored.insert(scored.end(), negatives.begin(), negatives.end());
    std::vector<double> labels(batch.size(), 1.0);
    labels.resize(scored.size(), 0.0);

    ad::Tape tape;
    CsrMatrix prop = build_propagation(reduced, params.mpnn.config.propagation);
    auto bound = bind_model(tape, params);
    auto h = mpnn_forward(tape, prop, tape.constant(x), params.mpnn.config,
                          bound.mpnn);
    auto logits =
        score_logits(tape, reduced, h, scored, params.predictor, bound);
    auto loss = ad::bce_with_logits(logits, labels);
    double loss_value = loss.item();
    if (!std::isfinite(loss_value))
      throw std::runtime_error(
          "train_epoch: non-finite loss at epoch " + std::to_string(epoch) +
          ", batch starting " + std::to_string(start));
    for (auto* p : param_ptrs) p->zero_grad();
    tape.backward(loss);
    adam_step(param_ptrs, adam, cfg.adam);

    loss_sum += loss_value * static_cast<double>(scored.size());
    example_count += scored.size();
  }
  return loss_sum / static_cast<double>(example_count);
}

/// Metric of a positive set against a shared negative pool, scored on a
/// fixed inference graph. For MRR every positive ranks against the same
/// shared pool unless per-positive lists are supplied.
inline double eval_metric(
    const Graph& g_infer, const DenseMatrix& x, ModelParams& params,
    std::span<const Edge> positives, std::span<const Edge> negatives,
    const MetricSpec& spec,
    const std::vector<std::vector<Edge>>* per_pos_negatives = nullptr) {
  if (positives.empty()) return 0.0;
  DenseMatrix h = mpnn_embed(g_infer, x, params.mpnn);
  std::vector<double> pos = score_links(g_infer, h, positives, params);
  if (spec.kind == MetricKind::HitsAtK) {
    std::vector<double> neg = score_links(g_infer, h, negatives, params);
    return hits_at_k(pos, neg, spec.k);
  }
  std::vector<std::vector<double>> negs;
  if (per_pos_negatives) {
    for (const auto& list : *per_pos_negatives)
      negs.push_back(score_links(g_infer, h, list, params));
  } else {
    std::vector<double> shared = score_links(g_infer, h, negatives, params);
    negs.assign(pos.size(), shared);
  }
  return mrr(pos, negs);
}

struct EpochRow {
  int epoch;
  double loss;
  double valid_metric;
};

struct TrainResult {
  std::vector<EpochRow> log;
  double best_valid = -1.0;
  int best_epoch = -1;
  double final_loss = 0.0;
};

/// Full training driver: builds the training graph from the split, runs up
/// to cfg.epochs epochs, tracks the validation metric after each one, and
/// restores the best-validation parameters before returning. Writes
/// "epoch,loss,valid_metric" rows when a log stream is given.
///
/// NCNC starts from a completion-free phase (see warmup_epochs): the inner
/// scorer has to become a usable link predictor before its probabilities
/// are worth pooling. Model selection only considers epochs scored with
/// the final predictor.
inline TrainResult train_model(const EvalSplit& split, const DenseMatrix& x,
                               ModelParams& params, const TrainConfig& cfg,
                               std::ostream* log_csv = nullptr,
                               const std::vector<double>* train_weights = nullptr) {
  cfg.validate();
  Graph g_train = Graph::from_edge_list(split.train, split.n, train_weights);
  AdamState adam = AdamState::init(params.all_params());
  TrainResult result;
  std::vector<std::vector<double>> best_values;
  if (log_csv) *log_csv << "epoch,loss,valid_metric\n";
  const bool select = !split.valid.empty();
  const int warmup = cfg.warmup_epochs();
  const int target_iters = params.predictor.completion_iters;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const bool warm = epoch < warmup;
    params.predictor.completion_iters = warm ? 0 : target_iters;
    double loss = train_epoch(g_train, x, params, adam, cfg, epoch);
    double valid = 0.0;
    if (select)
      valid = eval_metric(g_train, x, params, split.valid,
                          split.shared_negatives, split.metric);
    result.log.push_back({epoch, loss, valid});
    result.final_loss = loss;
    if (log_csv)
      *log_csv << epoch << ',' << loss << ',' << valid << '\n';
    if (select && !warm && valid > result.best_valid) {
      result.best_valid = valid;
      result.best_epoch = epoch;
      best_values.clear();
      for (auto* p : params.all_params()) best_values.push_back(p->value);
    }
  }
  params.predictor.completion_iters = target_iters;
  if (select && !best_values.empty()) {
    auto ptrs = params.all_params();
    for (std::size_t k = 0; k < ptrs.size(); ++k)
      ptrs[k]->value = best_values[k];
  }
  return result;
}

}  // namespace linkpred
