#pragma once

// Dense-tensor reverse-mode autodiff, just big enough for the MPNN + MLP
// stack. A Tape owns every tensor created through it and replays recorded
// ops in reverse on backward(). Tapes are single-threaded; independent
// tapes may run concurrently.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linkpred/linalg.hpp"

namespace linkpred::ad {

/// Persistent trainable parameter living outside any tape.
struct Param {
  std::size_t rows = 0, cols = 0;
  std::vector<double> value;
  std::vector<double> grad;

  Param() = default;
  Param(std::size_t r, std::size_t c)
      : rows(r), cols(c), value(r * c, 0.0), grad(r * c, 0.0) {}

  std::size_t size() const { return value.size(); }
  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

class Tape;

/// Lightweight handle to a tape-owned node.
class Tensor {
 public:
  Tensor() = default;
  std::size_t rows() const;
  std::size_t cols() const;
  const std::vector<double>& value() const;
  const std::vector<double>& grad() const;
  bool requires_grad() const;
  bool valid() const { return tape_ != nullptr; }
  /// Value of a 1x1 tensor.
  double item() const;

 private:
  friend class Tape;
  friend struct OpAccess;
  Tensor(Tape* t, std::size_t id) : tape_(t), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  /// When disabled, ops still compute forward values but record nothing.
  void set_grad_enabled(bool on) { grad_enabled_ = on; }
  bool grad_enabled() const { return grad_enabled_; }

  Tensor constant(std::size_t rows, std::size_t cols, std::vector<double> data) {
    return make(rows, cols, std::move(data), false);
  }

  Tensor constant(const DenseMatrix& m) {
    return make(m.rows, m.cols, m.data, false);
  }

  Tensor zeros(std::size_t rows, std::size_t cols, bool requires_grad = false) {
    return make(rows, cols, std::vector<double>(rows * cols, 0.0), requires_grad);
  }

  Tensor variable(std::size_t rows, std::size_t cols, std::vector<double> data) {
    return make(rows, cols, std::move(data), grad_enabled_);
  }

  /// Leaf bound to a persistent parameter; backward() adds the leaf's
  /// gradient into p.grad.
  Tensor leaf(Param& p) {
    Tensor t = make(p.rows, p.cols, p.value, grad_enabled_);
    if (node(t).requires_grad) bound_.push_back({&p, t.id_});
    return t;
  }

  /// Reverse sweep from a scalar loss. Each recorded op runs exactly once,
  /// in reverse creation order; gradients accumulate across tensor reuse.
  /// One backward pass per tape: a second call would replay the closures
  /// and double-count.
  void backward(Tensor loss) {
    Node& l = node(loss);
    if (l.rows != 1 || l.cols != 1)
      throw std::invalid_argument("backward: loss must be a 1x1 tensor");
    if (!l.requires_grad)
      throw std::invalid_argument("backward: loss does not require grad");
    l.grad[0] += 1.0;
    for (std::size_t id = loss.id_ + 1; id-- > 0;) {
      if (nodes_[id].backward) nodes_[id].backward();
    }
    for (auto& [param, id] : bound_) {
      const auto& g = nodes_[id].grad;
      for (std::size_t k = 0; k < g.size(); ++k) param->grad[k] += g[k];
    }
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  friend class Tensor;
  friend struct OpAccess;

  struct Node {
    std::size_t rows, cols;
    std::vector<double> value;
    std::vector<double> grad;  // allocated iff requires_grad
    bool requires_grad = false;
    std::function<void()> backward;
  };

  Tensor make(std::size_t rows, std::size_t cols, std::vector<double> data,
              bool requires_grad) {
    if (data.size() != rows * cols)
      throw std::invalid_argument("tensor: data size mismatch");
    Node n;
    n.rows = rows;
    n.cols = cols;
    n.value = std::move(data);
    n.requires_grad = requires_grad && grad_enabled_;
    if (n.requires_grad) n.grad.assign(rows * cols, 0.0);
    nodes_.push_back(std::move(n));
    return Tensor(this, nodes_.size() - 1);
  }

  Node& node(Tensor t) { return nodes_[t.id_]; }
  const Node& node(Tensor t) const { return nodes_[t.id_]; }

  std::vector<Node> nodes_;
  std::vector<std::pair<Param*, std::size_t>> bound_;
  bool grad_enabled_ = true;
};

inline std::size_t Tensor::rows() const { return tape_->node(*this).rows; }
inline std::size_t Tensor::cols() const { return tape_->node(*this).cols; }
inline const std::vector<double>& Tensor::value() const {
  return tape_->node(*this).value;
}
inline const std::vector<double>& Tensor::grad() const {
  return tape_->node(*this).grad;
}
inline bool Tensor::requires_grad() const {
  return tape_->node(*this).requires_grad;
}
inline double Tensor::item() const {
  const auto& n = tape_->node(*this);
  if (n.rows != 1 || n.cols != 1)
    throw std::invalid_argument("item: tensor is not 1x1");
  return n.value[0];
}

// Op implementations reach into the tape through this accessor.
struct OpAccess {
  static Tape::Node& node(Tape& t, Tensor x) { return t.node(x); }
  static Tensor make(Tape& t, std::size_t r, std::size_t c,
                     std::vector<double> v, bool rg) {
    return t.make(r, c, std::move(v), rg);
  }
  static void set_backward(Tape& t, Tensor x, std::function<void()> fn) {
    if (t.grad_enabled()) t.node(x).backward = std::move(fn);
  }
  static Tape* tape(Tensor x) { return x.tape_; }
  static std::size_t id(Tensor x) { return x.id_; }
};

namespace detail {

inline Tape& tape_of(Tensor a) { return *OpAccess::tape(a); }

inline void require_same_tape(Tensor a, Tensor b) {
  if (OpAccess::tape(a) != OpAccess::tape(b))
    throw std::invalid_argument("op: tensors live on different tapes");
}

inline void shape_error(const std::string& op) {
  throw std::invalid_argument(op + ": shape mismatch");
}

}  // namespace detail

inline Tensor matmul(Tensor a, Tensor b) {
  detail::require_same_tape(a, b);
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  auto& nb = OpAccess::node(t, b);
  if (na.cols != nb.rows) detail::shape_error("matmul");
  const std::size_t m = na.rows, k = na.cols, n = nb.cols;
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t kk = 0; kk < k; ++kk) {
      double aik = na.value[i * k + kk];
      if (aik == 0.0) continue;
      const double* brow = nb.value.data() + kk * n;
      double* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  bool rg = na.requires_grad || nb.requires_grad;
  Tensor y = OpAccess::make(t, m, n, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, b, y, m, k, n]() {
      auto& na = OpAccess::node(t, a);
      auto& nb = OpAccess::node(t, b);
      auto& ny = OpAccess::node(t, y);
      if (na.requires_grad) {
        // dA += dY * B^T
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            double g = ny.grad[i * n + j];
            if (g == 0.0) continue;
            for (std::size_t kk = 0; kk < k; ++kk)
              na.grad[i * k + kk] += g * nb.value[kk * n + j];
          }
      }
      if (nb.requires_grad) {
        // dB += A^T * dY
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t kk = 0; kk < k; ++kk) {
            double av = na.value[i * k + kk];
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j)
              nb.grad[kk * n + j] += av * ny.grad[i * n + j];
          }
      }
    });
  return y;
}

/// Sparse-dense product P * X with a constant sparse operator.
inline Tensor spmm(const CsrMatrix& p, Tensor x) {
  Tape& t = detail::tape_of(x);
  auto& nx = OpAccess::node(t, x);
  if (p.cols != nx.rows) detail::shape_error("spmm");
  const std::size_t c = nx.cols;
  std::vector<double> out(p.rows * c, 0.0);
  for (std::size_t i = 0; i < p.rows; ++i)
    for (std::size_t e = p.row_offsets[i]; e < p.row_offsets[i + 1]; ++e) {
      double w = p.values[e];
      const double* xrow = nx.value.data() + p.col_indices[e] * c;
      double* orow = out.data() + i * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += w * xrow[j];
    }
  bool rg = nx.requires_grad;
  Tensor y = OpAccess::make(t, p.rows, c, std::move(out), rg);
  if (rg)
    // p is copied into the closure: the tape must not outlive its inputs
    OpAccess::set_backward(t, y, [&t, p, x, y, c]() {
      auto& nx = OpAccess::node(t, x);
      auto& ny = OpAccess::node(t, y);
      // dX += P^T * dY, via scatter over the rows of P
      for (std::size_t i = 0; i < p.rows; ++i)
        for (std::size_t e = p.row_offsets[i]; e < p.row_offsets[i + 1]; ++e) {
          double w = p.values[e];
          double* xg = nx.grad.data() + p.col_indices[e] * c;
          const double* yg = ny.grad.data() + i * c;
          for (std::size_t j = 0; j < c; ++j) xg[j] += w * yg[j];
        }
    });
  return y;
}

inline Tensor add(Tensor a, Tensor b) {
  detail::require_same_tape(a, b);
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  auto& nb = OpAccess::node(t, b);
  if (na.rows != nb.rows || na.cols != nb.cols) detail::shape_error("add");
  std::vector<double> out(na.value.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = na.value[k] + nb.value[k];
  bool rg = na.requires_grad || nb.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, b, y]() {
      auto& na = OpAccess::node(t, a);
      auto& nb = OpAccess::node(t, b);
      auto& ny = OpAccess::node(t, y);
      if (na.requires_grad)
        for (std::size_t k = 0; k < ny.grad.size(); ++k) na.grad[k] += ny.grad[k];
      if (nb.requires_grad)
        for (std::size_t k = 0; k < ny.grad.size(); ++k) nb.grad[k] += ny.grad[k];
    });
  return y;
}

/// Adds a 1 x cols bias row to every row of a.
inline Tensor add_row_bias(Tensor a, Tensor bias) {
  detail::require_same_tape(a, bias);
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  auto& nb = OpAccess::node(t, bias);
  if (nb.rows != 1 || nb.cols != na.cols) detail::shape_error("add_row_bias");
  std::vector<double> out(na.value.size());
  for (std::size_t i = 0; i < na.rows; ++i)
    for (std::size_t j = 0; j < na.cols; ++j)
      out[i * na.cols + j] = na.value[i * na.cols + j] + nb.value[j];
  bool rg = na.requires_grad || nb.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, bias, y]() {
      auto& na = OpAccess::node(t, a);
      auto& nb = OpAccess::node(t, bias);
      auto& ny = OpAccess::node(t, y);
      if (na.requires_grad)
        for (std::size_t k = 0; k < ny.grad.size(); ++k) na.grad[k] += ny.grad[k];
      if (nb.requires_grad)
        for (std::size_t i = 0; i < na.rows; ++i)
          for (std::size_t j = 0; j < na.cols; ++j)
            nb.grad[j] += ny.grad[i * na.cols + j];
    });
  return y;
}

inline Tensor hadamard(Tensor a, Tensor b) {
  detail::require_same_tape(a, b);
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  auto& nb = OpAccess::node(t, b);
  if (na.rows != nb.rows || na.cols != nb.cols) detail::shape_error("hadamard");
  std::vector<double> out(na.value.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = na.value[k] * nb.value[k];
  bool rg = na.requires_grad || nb.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, b, y]() {
      auto& na = OpAccess::node(t, a);
      auto& nb = OpAccess::node(t, b);
      auto& ny = OpAccess::node(t, y);
      if (na.requires_grad)
        for (std::size_t k = 0; k < ny.grad.size(); ++k)
          na.grad[k] += ny.grad[k] * nb.value[k];
      if (nb.requires_grad)
        for (std::size_t k = 0; k < ny.grad.size(); ++k)
          nb.grad[k] += ny.grad[k] * na.value[k];
    });
  return y;
}

inline Tensor concat_cols(Tensor a, Tensor b) {
  detail::require_same_tape(a, b);
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  auto& nb = OpAccess::node(t, b);
  if (na.rows != nb.rows) detail::shape_error("concat_cols");
  const std::size_t ca = na.cols, cb = nb.cols, c = ca + cb;
  std::vector<double> out(na.rows * c);
  for (std::size_t i = 0; i < na.rows; ++i) {
    for (std::size_t j = 0; j < ca; ++j) out[i * c + j] = na.value[i * ca + j];
    for (std::size_t j = 0; j < cb; ++j)
      out[i * c + ca + j] = nb.value[i * cb + j];
  }
  bool rg = na.requires_grad || nb.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, c, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, b, y, ca, cb, c]() {
      auto& na = OpAccess::node(t, a);
      auto& nb = OpAccess::node(t, b);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t i = 0; i < na.rows; ++i) {
        if (na.requires_grad)
          for (std::size_t j = 0; j < ca; ++j)
            na.grad[i * ca + j] += ny.grad[i * c + j];
        if (nb.requires_grad)
          for (std::size_t j = 0; j < cb; ++j)
            nb.grad[i * cb + j] += ny.grad[i * c + ca + j];
      }
    });
  return y;
}

inline Tensor row_sum(Tensor a) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  std::vector<double> out(na.rows, 0.0);
  for (std::size_t i = 0; i < na.rows; ++i)
    for (std::size_t j = 0; j < na.cols; ++j) out[i] += na.value[i * na.cols + j];
  bool rg = na.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, 1, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, y]() {
      auto& na = OpAccess::node(t, a);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t i = 0; i < na.rows; ++i)
        for (std::size_t j = 0; j < na.cols; ++j)
          na.grad[i * na.cols + j] += ny.grad[i];
    });
  return y;
}

inline Tensor sum_all(Tensor a) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  double s = 0.0;
  for (double v : na.value) s += v;
  bool rg = na.requires_grad;
  Tensor y = OpAccess::make(t, 1, 1, {s}, rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, y]() {
      auto& na = OpAccess::node(t, a);
      auto& ny = OpAccess::node(t, y);
      for (double& g : na.grad) g += ny.grad[0];
    });
  return y;
}

inline Tensor scale(Tensor a, double c) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  std::vector<double> out(na.value.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = c * na.value[k];
  bool rg = na.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, y, c]() {
      auto& na = OpAccess::node(t, a);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t k = 0; k < ny.grad.size(); ++k)
        na.grad[k] += c * ny.grad[k];
    });
  return y;
}

inline Tensor sigmoid(Tensor a) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  std::vector<double> out(na.value.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = 1.0 / (1.0 + std::exp(-na.value[k]));
  bool rg = na.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, y]() {
      auto& na = OpAccess::node(t, a);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t k = 0; k < ny.grad.size(); ++k) {
        double s = ny.value[k];
        na.grad[k] += ny.grad[k] * s * (1.0 - s);
      }
    });
  return y;
}

inline Tensor relu(Tensor a) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  std::vector<double> out(na.value.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = na.value[k] > 0.0 ? na.value[k] : 0.0;
  bool rg = na.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, y]() {
      auto& na = OpAccess::node(t, a);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t k = 0; k < ny.grad.size(); ++k)
        if (na.value[k] > 0.0) na.grad[k] += ny.grad[k];
    });
  return y;
}

/// Mean binary cross entropy computed from logits (log-sum-exp form, no
/// sigmoid saturation). Labels must be exactly 0 or 1.
inline Tensor bce_with_logits(Tensor logits, const std::vector<double>& labels) {
  Tape& t = detail::tape_of(logits);
  auto& nl = OpAccess::node(t, logits);
  if (nl.cols != 1 || nl.rows != labels.size())
    detail::shape_error("bce_with_logits");
  if (labels.empty())
    throw std::invalid_argument("bce_with_logits: empty batch");
  for (double z : labels)
    if (z != 0.0 && z != 1.0)
      throw std::invalid_argument("bce_with_logits: label outside {0,1}");
  const std::size_t m = labels.size();
  double loss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double x = nl.value[i];
    loss += std::max(x, 0.0) - x * labels[i] + std::log1p(std::exp(-std::abs(x)));
  }
  loss /= static_cast<double>(m);
  bool rg = nl.requires_grad;
  Tensor y = OpAccess::make(t, 1, 1, {loss}, rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, logits, y, labels, m]() {
      auto& nl = OpAccess::node(t, logits);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t i = 0; i < m; ++i) {
        double s = 1.0 / (1.0 + std::exp(-nl.value[i]));
        nl.grad[i] += ny.grad[0] * (s - labels[i]) / static_cast<double>(m);
      }
    });
  return y;
}

/// Rows of h selected by index: out[b] = h[idx[b]].
inline Tensor gather_rows(Tensor h, std::vector<std::uint32_t> idx) {
  Tape& t = detail::tape_of(h);
  auto& nh = OpAccess::node(t, h);
  const std::size_t c = nh.cols;
  for (auto r : idx)
    if (r >= nh.rows) throw std::out_of_range("gather_rows: row out of range");
  std::vector<double> out(idx.size() * c);
  for (std::size_t b = 0; b < idx.size(); ++b)
    for (std::size_t j = 0; j < c; ++j)
      out[b * c + j] = nh.value[idx[b] * c + j];
  bool rg = nh.requires_grad;
  Tensor y = OpAccess::make(t, idx.size(), c, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, h, y, idx = std::move(idx), c]() {
      auto& nh = OpAccess::node(t, h);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t b = 0; b < idx.size(); ++b)
        for (std::size_t j = 0; j < c; ++j)
          nh.grad[idx[b] * c + j] += ny.grad[b * c + j];
    });
  return y;
}

/// Segment-pooled weighted row sums: out[b] = sum over k in segment b of
/// weights[k] * h[indices[k]]. Segment b covers indices[offsets[b] ..
/// offsets[b+1]). An invalid `weights` handle means all-ones weights.
/// Gradients flow into both h and weights.
inline Tensor weighted_pool_rows(Tensor h, std::vector<std::size_t> offsets,
                                 std::vector<std::uint32_t> indices,
                                 Tensor weights = Tensor()) {
  Tape& t = detail::tape_of(h);
  auto& nh = OpAccess::node(t, h);
  const std::size_t c = nh.cols;
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != indices.size())
    throw std::invalid_argument("weighted_pool_rows: bad offsets");
  const bool has_w = weights.valid();
  if (has_w) {
    detail::require_same_tape(h, weights);
    auto& nw = OpAccess::node(t, weights);
    if (nw.cols != 1 || nw.rows != indices.size())
      detail::shape_error("weighted_pool_rows");
  }
  for (auto r : indices)
    if (r >= nh.rows)
      throw std::out_of_range("weighted_pool_rows: row out of range");
  const std::size_t segments = offsets.size() - 1;
  std::vector<double> out(segments * c, 0.0);
  const double* wv = has_w ? OpAccess::node(t, weights).value.data() : nullptr;
  for (std::size_t b = 0; b < segments; ++b)
    for (std::size_t k = offsets[b]; k < offsets[b + 1]; ++k) {
      double w = wv ? wv[k] : 1.0;
      const double* hrow = nh.value.data() + indices[k] * c;
      double* orow = out.data() + b * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += w * hrow[j];
    }
  bool rg = nh.requires_grad ||
            (has_w && OpAccess::node(t, weights).requires_grad);
  Tensor y = OpAccess::make(t, segments, c, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(
        t, y,
        [&t, h, weights, y, offsets = std::move(offsets),
         indices = std::move(indices), c, has_w, segments]() {
          auto& nh = OpAccess::node(t, h);
          auto& ny = OpAccess::node(t, y);
          const double* wv =
              has_w ? OpAccess::node(t, weights).value.data() : nullptr;
          for (std::size_t b = 0; b < segments; ++b)
            for (std::size_t k = offsets[b]; k < offsets[b + 1]; ++k) {
              const double* yg = ny.grad.data() + b * c;
              if (nh.requires_grad) {
                double w = wv ? wv[k] : 1.0;
                double* hg = nh.grad.data() + indices[k] * c;
                for (std::size_t j = 0; j < c; ++j) hg[j] += w * yg[j];
              }
              if (has_w && OpAccess::node(t, weights).requires_grad) {
                const double* hrow = nh.value.data() + indices[k] * c;
                double d = 0.0;
                for (std::size_t j = 0; j < c; ++j) d += yg[j] * hrow[j];
                OpAccess::node(t, weights).grad[k] += d;
              }
            }
        });
  return y;
}

/// Builds an nnz x 1 weight column from a constant-1 baseline with soft
/// entries substituted: slot k takes soft[soft_index[k]] when
/// soft_index[k] >= 0, else the constant 1. Gradients reach `soft`.
inline Tensor mix_weights(Tape& t, std::vector<std::int64_t> soft_index,
                          Tensor soft) {
  const bool has_soft = soft.valid();
  std::size_t soft_rows = 0;
  if (has_soft) {
    auto& ns = OpAccess::node(t, soft);
    if (ns.cols != 1) detail::shape_error("mix_weights");
    soft_rows = ns.rows;
  }
  std::vector<double> out(soft_index.size(), 1.0);
  for (std::size_t k = 0; k < soft_index.size(); ++k) {
    auto s = soft_index[k];
    if (s < 0) continue;
    if (!has_soft || static_cast<std::size_t>(s) >= soft_rows)
      throw std::out_of_range("mix_weights: soft index out of range");
    out[k] = OpAccess::node(t, soft).value[s];
  }
  bool rg = has_soft && OpAccess::node(t, soft).requires_grad;
  Tensor y = OpAccess::make(t, soft_index.size(), 1, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, soft, y, soft_index = std::move(soft_index)]() {
      auto& ns = OpAccess::node(t, soft);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t k = 0; k < soft_index.size(); ++k)
        if (soft_index[k] >= 0) ns.grad[soft_index[k]] += ny.grad[k];
    });
  return y;
}

/// Row-wise dot product of equal-shape matrices: out[i] = <a_i, b_i>.
inline Tensor dot_rows(Tensor a, Tensor b) {
  detail::require_same_tape(a, b);
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  auto& nb = OpAccess::node(t, b);
  if (na.rows != nb.rows || na.cols != nb.cols) detail::shape_error("dot_rows");
  std::vector<double> out(na.rows, 0.0);
  for (std::size_t i = 0; i < na.rows; ++i)
    for (std::size_t j = 0; j < na.cols; ++j)
      out[i] += na.value[i * na.cols + j] * nb.value[i * na.cols + j];
  bool rg = na.requires_grad || nb.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, 1, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, b, y]() {
      auto& na = OpAccess::node(t, a);
      auto& nb = OpAccess::node(t, b);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t i = 0; i < na.rows; ++i) {
        double g = ny.grad[i];
        if (g == 0.0) continue;
        for (std::size_t j = 0; j < na.cols; ++j) {
          if (na.requires_grad)
            na.grad[i * na.cols + j] += g * nb.value[i * na.cols + j];
          if (nb.requires_grad)
            nb.grad[i * na.cols + j] += g * na.value[i * na.cols + j];
        }
      }
    });
  return y;
}

/// Elementwise clamp to [lo, hi]; gradient passes only where unclamped.
inline Tensor clamp(Tensor a, double lo, double hi) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  std::vector<double> out(na.value.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::min(std::max(na.value[k], lo), hi);
  bool rg = na.requires_grad;
  Tensor y = OpAccess::make(t, na.rows, na.cols, std::move(out), rg);
  if (rg)
    OpAccess::set_backward(t, y, [&t, a, y, lo, hi]() {
      auto& na = OpAccess::node(t, a);
      auto& ny = OpAccess::node(t, y);
      for (std::size_t k = 0; k < ny.grad.size(); ++k)
        if (na.value[k] > lo && na.value[k] < hi) na.grad[k] += ny.grad[k];
    });
  return y;
}

/// Constant copy; gradients stop here.
inline Tensor detach(Tensor a) {
  Tape& t = detail::tape_of(a);
  auto& na = OpAccess::node(t, a);
  return OpAccess::make(t, na.rows, na.cols, na.value, false);
}

}  // namespace linkpred::ad
