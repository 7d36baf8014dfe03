#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/linalg.hpp"
#include "linkpred/tensor.hpp"

namespace linkpred {

enum class Propagation { SymNorm, RowNorm, RawSum };
enum class Activation { ReLU, Identity };

/// GCN-style message passing: h^(k) = act(P h^(k-1) W^(k) + b^(k)).
struct MpnnConfig {
  int layers = 2;
  std::size_t in_dim = 0;      // F_0, taken from the feature matrix
  std::size_t hidden_dim = 64; // F_k for every k >= 1
  Activation activation = Activation::ReLU;
  Propagation propagation = Propagation::SymNorm;

  void validate() const {
    if (layers < 1) throw std::invalid_argument("MpnnConfig: layers >= 1");
    if (in_dim == 0 || hidden_dim == 0)
      throw std::invalid_argument("MpnnConfig: zero dimension");
  }
};

struct MpnnParams {
  MpnnConfig config;
  std::vector<ad::Param> weights;  // layer k: F_{k-1} x F_k
  std::vector<ad::Param> biases;   // 1 x F_k

  std::size_t out_dim() const { return config.hidden_dim; }

  /// Xavier-uniform weights, zero biases, seeded.
  static MpnnParams init(const MpnnConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    MpnnParams p;
    p.config = cfg;
    std::size_t fan_in = cfg.in_dim;
    for (int k = 0; k < cfg.layers; ++k) {
      std::size_t fan_out = cfg.hidden_dim;
      ad::Param w(fan_in, fan_out);
      double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      std::uniform_real_distribution<double> u(-limit, limit);
      for (auto& x : w.value) x = u(rng);
      p.weights.push_back(std::move(w));
      p.biases.emplace_back(1, fan_out);
      fan_in = fan_out;
    }
    return p;
  }
};

/// Propagation operator over the graph:
///   sym_norm: D̃^{-1/2} (A+I) D̃^{-1/2}   (weighted degrees incl. self loop)
///   row_norm: D̃^{-1} (A+I)
///   raw_sum:  A
inline CsrMatrix build_propagation(const Graph& g, Propagation kind) {
  const std::size_t n = g.node_count();
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_offsets.assign(1, 0);
  if (kind == Propagation::RawSum) {
    for (NodeId u = 0; u < n; ++u) {
      auto nb = g.neighbors(u);
      auto w = g.neighbor_weights(u);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        m.col_indices.push_back(nb[k]);
        m.values.push_back(w[k]);
      }
      m.row_offsets.push_back(m.col_indices.size());
    }
    return m;
  }
  std::vector<double> deg(n);
  for (NodeId u = 0; u < n; ++u) deg[u] = g.weighted_degree(u) + 1.0;
  for (NodeId u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    auto w = g.neighbor_weights(u);
    std::size_t k = 0;
    bool self_done = false;
    auto push = [&](NodeId v, double a) {
      double norm = kind == Propagation::SymNorm
                        ? a / std::sqrt(deg[u] * deg[v])
                        : a / deg[u];
      m.col_indices.push_back(v);
      m.values.push_back(norm);
    };
    for (; k < nb.size(); ++k) {
      if (!self_done && nb[k] > u) {
        push(u, 1.0);
        self_done = true;
      }
      push(nb[k], w[k]);
    }
    if (!self_done) push(u, 1.0);
    m.row_offsets.push_back(m.col_indices.size());
  }
  return m;
}

/// Per-tape handles of the MPNN parameters.
struct MpnnBound {
  std::vector<ad::Tensor> weights, biases;
};

inline MpnnBound bind_mpnn(ad::Tape& tape, MpnnParams& params) {
  MpnnBound b;
  for (std::size_t k = 0; k < params.weights.size(); ++k) {
    b.weights.push_back(tape.leaf(params.weights[k]));
    b.biases.push_back(tape.leaf(params.biases[k]));
  }
  return b;
}

inline ad::Tensor apply_activation(ad::Tensor x, Activation act) {
  return act == Activation::ReLU ? ad::relu(x) : x;
}

/// Runs all message-passing layers; callers reuse the returned H for every
/// target link of the batch.
inline ad::Tensor mpnn_forward(ad::Tape& tape, const CsrMatrix& prop,
                               ad::Tensor x, const MpnnConfig& cfg,
                               const MpnnBound& bound) {
  cfg.validate();
  if (x.cols() != cfg.in_dim)
    throw std::invalid_argument("mpnn_forward: feature dim mismatch");
  if (x.rows() != prop.rows)
    throw std::invalid_argument("mpnn_forward: node count mismatch");
  ad::Tensor h = x;
  for (int k = 0; k < cfg.layers; ++k) {
    auto agg = ad::spmm(prop, h);
    auto lin = ad::add_row_bias(ad::matmul(agg, bound.weights[k]),
                                bound.biases[k]);
    h = apply_activation(lin, cfg.activation);
  }
  return h;
}

/// Forward-only node embeddings H = MPNN(A, X).
inline DenseMatrix mpnn_embed(const Graph& g, const DenseMatrix& x,
                              MpnnParams& params) {
  ad::Tape tape;
  tape.set_grad_enabled(false);
  CsrMatrix prop = build_propagation(g, params.config.propagation);
  auto xt = tape.constant(x);
  auto bound = bind_mpnn(tape, params);
  auto h = mpnn_forward(tape, prop, xt, params.config, bound);
  return DenseMatrix(h.rows(), h.cols(), h.value());
}

}  // namespace linkpred
