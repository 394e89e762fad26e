// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Define-by-run reverse-mode differentiation over 2-D tensors.
//
// A Tape records every operation applied to its Vars in execution order, so
// the node list is topologically sorted by construction. Tape::backward walks
// it once in reverse and sums gradients across fan-out. A tape built with
// recording disabled keeps values only, for inference.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "urlgnn/error.hpp"
#include "urlgnn/rng.hpp"
#include "urlgnn/tensor.hpp"

namespace urlgnn {

using NodeId = std::size_t;
class Tape;

/// Handle to a tape node. Cheap to copy; valid while its tape lives.
struct Var {
  Tape* tape = nullptr;
  NodeId id = 0;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

class Tape {
 public:
  /// Accumulates into the gradients of a node's inputs, given the node's
  /// own id and gradient.
  using BackwardFn = std::function<void(Tape&, NodeId self, const Tensor& out_grad)>;

  explicit Tape(bool recording = true) : recording_(recording) { nodes_.reserve(256); }

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const noexcept { return recording_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Untracked input.
  Var constant(Tensor value) { return push(std::move(value), nullptr, false); }

  /// Tracked input owned by the tape.
  Var leaf(Tensor value) { return push(std::move(value), nullptr, recording_); }

  /// Tracked input borrowed from the caller; `ref` must outlive the tape.
  Var parameter(const Tensor& ref) { return push(Tensor{}, &ref, recording_); }

  /// Records an operation result. The backward rule is kept only when some
  /// input requires a gradient.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
    bool needs = false;
    if (recording_) {
      for (const Var& in : inputs) needs = needs || nodes_[in.id].requires_grad;
    }
    Var out = push(std::move(value), nullptr, needs);
    if (needs) nodes_[out.id].backward = std::move(fn);
    return out;
  }

  /// Same as above for a runtime-sized input list.
  Var record(Tensor value, std::span<const Var> inputs, BackwardFn fn) {
    bool needs = false;
    if (recording_) {
      for (const Var& in : inputs) needs = needs || nodes_[in.id].requires_grad;
    }
    Var out = push(std::move(value), nullptr, needs);
    if (needs) nodes_[out.id].backward = std::move(fn);
    return out;
  }

  const Tensor& value(NodeId id) const {
    const Node& n = nodes_[id];
    return n.borrowed ? *n.borrowed : n.owned;
  }

  bool requires_grad(NodeId id) const { return nodes_[id].requires_grad; }

  /// Gradient buffer of a node, zero-initialised on first use.
  Tensor& grad_ref(NodeId id) {
    Node& n = nodes_[id];
    if (n.grad.empty()) {
      const Tensor& v = value(id);
      n.grad = Tensor(v.rows(), v.cols());
    }
    return n.grad;
  }

  /// Gradient of the last backward pass w.r.t. `v`; zeros when untouched.
  Tensor grad(Var v) const {
    const Node& n = nodes_[v.id];
    if (n.grad.empty()) {
      const Tensor& val = value(v.id);
      return Tensor(val.rows(), val.cols());
    }
    return n.grad;
  }

  /// Reverse sweep from a scalar node. Each node's rule runs at most once.
  void backward(Var loss) {
    const Tensor& lv = value(loss.id);
    if (lv.rows() != 1 || lv.cols() != 1) {
      throw Error(ErrorKind::NotScalarLoss, "loss has shape " + lv.shape_string());
    }
    for (Node& n : nodes_) n.grad = Tensor{};
    if (!nodes_[loss.id].requires_grad) return;
    grad_ref(loss.id)[0] = 1.0;
    for (NodeId id = loss.id + 1; id-- > 0;) {
      Node& n = nodes_[id];
      if (!n.backward || n.grad.empty()) continue;
      n.backward(*this, id, n.grad);
    }
  }

 private:
  struct Node {
    Tensor owned;
    const Tensor* borrowed = nullptr;
    Tensor grad;
    BackwardFn backward;
    bool requires_grad = false;
  };

  Var push(Tensor value, const Tensor* borrowed, bool requires_grad) {
    Node n;
    n.owned = std::move(value);
    n.borrowed = borrowed;
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var{this, nodes_.size() - 1};
  }

  bool recording_;
  std::vector<Node> nodes_;
};

inline const Tensor& Var::value() const { return tape->value(id); }

namespace detail {

inline void require_same_tape(const Var& a, const Var& b) {
  if (a.tape != b.tape) throw Error(ErrorKind::ShapeMismatch, "vars belong to different tapes");
}

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::ShapeMismatch, std::string(op) + " " + a.shape_string() + " vs " + b.shape_string());
  }
}

inline void accumulate(Tape& t, const Var& v, const Tensor& g) {
  if (!t.requires_grad(v.id)) return;
  Tensor& dst = t.grad_ref(v.id);
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
}

inline double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linear algebra

inline Var matmul(Var a, Var b) {
  detail::require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "matmul " + av.shape_string() + " x " + bv.shape_string());
  }
  Tensor out(av.rows(), bv.cols());
  kernels::gemm_nn(av, bv, out);
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape& t, NodeId, const Tensor& g) {
    if (t.requires_grad(a.id)) kernels::gemm_nt(g, t.value(b.id), t.grad_ref(a.id));
    if (t.requires_grad(b.id)) kernels::gemm_tn(t.value(a.id), g, t.grad_ref(b.id));
  });
}

inline Var add(Var a, Var b) {
  detail::require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  detail::require_same_shape(av, bv, "add");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape& t, NodeId, const Tensor& g) {
    detail::accumulate(t, a, g);
    detail::accumulate(t, b, g);
  });
}

inline Var sub(Var a, Var b) {
  detail::require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  detail::require_same_shape(av, bv, "sub");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape& t, NodeId, const Tensor& g) {
    detail::accumulate(t, a, g);
    if (t.requires_grad(b.id)) {
      Tensor& db = t.grad_ref(b.id);
      for (std::size_t i = 0; i < g.size(); ++i) db[i] -= g[i];
    }
  });
}

/// Elementwise product.
inline Var mul(Var a, Var b) {
  detail::require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  detail::require_same_shape(av, bv, "mul");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape& t, NodeId, const Tensor& g) {
    if (t.requires_grad(a.id)) {
      Tensor& da = t.grad_ref(a.id);
      const Tensor& bv = t.value(b.id);
      for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * bv[i];
    }
    if (t.requires_grad(b.id)) {
      Tensor& db = t.grad_ref(b.id);
      const Tensor& av = t.value(a.id);
      for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i] * av[i];
    }
  });
}

inline Var scale(Var a, double s) {
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
  return a.tape->record(std::move(out), {a}, [a, s](Tape& t, NodeId, const Tensor& g) {
    Tensor& da = t.grad_ref(a.id);
    for (std::size_t i = 0; i < g.size(); ++i) da[i] += s * g[i];
  });
}

/// Adds a 1xN bias row to every row of an MxN input. The only broadcast the
/// engine supports.
inline Var add_row(Var a, Var bias) {
  detail::require_same_tape(a, bias);
  const Tensor& av = a.value();
  const Tensor& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != av.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "add_row " + av.shape_string() + " + " + bv.shape_string());
  }
  Tensor out = av;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += bv[c];
  }
  return a.tape->record(std::move(out), {a, bias}, [a, bias](Tape& t, NodeId, const Tensor& g) {
    detail::accumulate(t, a, g);
    if (t.requires_grad(bias.id)) {
      Tensor& db = t.grad_ref(bias.id);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        auto row = g.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) db[c] += row[c];
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Elementwise nonlinearities

enum class ActivationKind { Relu, LeakyRelu, Sigmoid, Tanh };

struct Activation {
  ActivationKind kind = ActivationKind::Relu;
  double slope = 0.2;  // LeakyRelu only

  static Activation relu() { return {ActivationKind::Relu, 0.0}; }
  static Activation leaky_relu(double slope = 0.2) { return {ActivationKind::LeakyRelu, slope}; }
  static Activation sigmoid() { return {ActivationKind::Sigmoid, 0.0}; }
  static Activation tanh() { return {ActivationKind::Tanh, 0.0}; }

  double apply(double x) const {
    switch (kind) {
      case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
      case ActivationKind::LeakyRelu: return x > 0.0 ? x : slope * x;
      case ActivationKind::Sigmoid: return detail::stable_sigmoid(x);
      case ActivationKind::Tanh: return std::tanh(x);
    }
    return x;
  }

  /// Derivative given input x and output y. relu'(0) = 0, leaky_relu'(0) = slope.
  double derivative(double x, double y) const {
    switch (kind) {
      case ActivationKind::Relu: return x > 0.0 ? 1.0 : 0.0;
      case ActivationKind::LeakyRelu: return x > 0.0 ? 1.0 : slope;
      case ActivationKind::Sigmoid: return y * (1.0 - y);
      case ActivationKind::Tanh: return 1.0 - y * y;
    }
    return 1.0;
  }
};

inline Var activation(Var x, Activation act) {
  const Tensor& xv = x.value();
  Tensor out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = act.apply(xv[i]);
  return x.tape->record(std::move(out), {x}, [x, act](Tape& t, NodeId self, const Tensor& g) {
    const Tensor& in = t.value(x.id);
    const Tensor& y = t.value(self);
    Tensor& dx = t.grad_ref(x.id);
    for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * act.derivative(in[i], y[i]);
  });
}

inline Var relu(Var x) { return activation(x, Activation::relu()); }
inline Var leaky_relu(Var x, double slope = 0.2) { return activation(x, Activation::leaky_relu(slope)); }
inline Var sigmoid(Var x) { return activation(x, Activation::sigmoid()); }
inline Var tanh(Var x) { return activation(x, Activation::tanh()); }

// ---------------------------------------------------------------------------
// Row-wise normalisation

inline Tensor softmax_rows(const Tensor& x) {
  Tensor out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    auto o = out.row(r);
    double m = *std::max_element(in.begin(), in.end());
    double s = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) s += (o[c] = std::exp(in[c] - m));
    for (double& v : o) v /= s;
  }
  return out;
}

inline Tensor log_softmax_rows(const Tensor& x) {
  Tensor out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    auto o = out.row(r);
    double m = *std::max_element(in.begin(), in.end());
    double s = 0.0;
    for (double v : in) s += std::exp(v - m);
    const double log_s = std::log(s);
    for (std::size_t c = 0; c < in.size(); ++c) o[c] = (in[c] - m) - log_s;
  }
  return out;
}

inline Var softmax_rows(Var x) {
  return x.tape->record(softmax_rows(x.value()), {x}, [x](Tape& t, NodeId self, const Tensor& g) {
    const Tensor& y = t.value(self);
    Tensor& dx = t.grad_ref(x.id);
    for (std::size_t r = 0; r < y.rows(); ++r) {
      auto yr = y.row(r);
      auto gr = g.row(r);
      double dot = 0.0;
      for (std::size_t c = 0; c < yr.size(); ++c) dot += gr[c] * yr[c];
      auto dr = dx.row(r);
      for (std::size_t c = 0; c < yr.size(); ++c) dr[c] += yr[c] * (gr[c] - dot);
    }
  });
}

inline Var log_softmax_rows(Var x) {
  return x.tape->record(log_softmax_rows(x.value()), {x}, [x](Tape& t, NodeId self, const Tensor& g) {
    const Tensor& y = t.value(self);
    Tensor& dx = t.grad_ref(x.id);
    for (std::size_t r = 0; r < y.rows(); ++r) {
      auto yr = y.row(r);
      auto gr = g.row(r);
      double gsum = 0.0;
      for (double v : gr) gsum += v;
      auto dr = dx.row(r);
      for (std::size_t c = 0; c < yr.size(); ++c) dr[c] += gr[c] - std::exp(yr[c]) * gsum;
    }
  });
}

// ---------------------------------------------------------------------------
// Reductions and reshaping

/// Sum of all entries, 1x1.
inline Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value().span()) s += v;
  return x.tape->record(Tensor(1, 1, s), {x}, [x](Tape& t, NodeId, const Tensor& g) {
    Tensor& dx = t.grad_ref(x.id);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g[0];
  });
}

/// Column-wise mean over rows, 1xN.
inline Var mean_rows(Var x) {
  const Tensor& xv = x.value();
  if (xv.rows() == 0) throw Error(ErrorKind::ShapeMismatch, "mean_rows of an empty tensor");
  Tensor out(1, xv.cols());
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    auto row = xv.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(xv.rows());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] *= inv;
  return x.tape->record(std::move(out), {x}, [x, inv](Tape& t, NodeId, const Tensor& g) {
    Tensor& dx = t.grad_ref(x.id);
    for (std::size_t r = 0; r < dx.rows(); ++r) {
      auto row = dx.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] += g[c] * inv;
    }
  });
}

/// Columns [start, start+count).
inline Var slice_cols(Var x, std::size_t start, std::size_t count) {
  const Tensor& xv = x.value();
  if (start + count > xv.cols() || count == 0) {
    throw Error(ErrorKind::ShapeMismatch, "slice_cols out of range on " + xv.shape_string());
  }
  Tensor out(xv.rows(), count);
  for (std::size_t r = 0; r < xv.rows(); ++r) {
    auto src = xv.row(r).subspan(start, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return x.tape->record(std::move(out), {x}, [x, start, count](Tape& t, NodeId, const Tensor& g) {
    Tensor& dx = t.grad_ref(x.id);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      auto dst = dx.row(r).subspan(start, count);
      auto src = g.row(r);
      for (std::size_t c = 0; c < count; ++c) dst[c] += src[c];
    }
  });
}

/// Horizontal concatenation; all parts share a row count.
inline Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw Error(ErrorKind::ShapeMismatch, "concat_cols of nothing");
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  for (const Var& p : parts) {
    detail::require_same_tape(parts[0], p);
    if (p.rows() != rows) throw Error(ErrorKind::ShapeMismatch, "concat_cols row mismatch");
    cols += p.cols();
  }
  Tensor out(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& pv = p.value();
    for (std::size_t r = 0; r < rows; ++r) {
      auto src = pv.row(r);
      std::copy(src.begin(), src.end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
    }
    offset += pv.cols();
  }
  std::vector<Var> ins(parts.begin(), parts.end());
  return parts[0].tape->record(std::move(out), parts, [ins](Tape& t, NodeId, const Tensor& g) {
    std::size_t off = 0;
    for (const Var& p : ins) {
      const std::size_t w = t.value(p.id).cols();
      if (t.requires_grad(p.id)) {
        Tensor& dp = t.grad_ref(p.id);
        for (std::size_t r = 0; r < g.rows(); ++r) {
          auto src = g.row(r).subspan(off, w);
          auto dst = dp.row(r);
          for (std::size_t c = 0; c < w; ++c) dst[c] += src[c];
        }
      }
      off += w;
    }
  });
}

inline Var concat_cols(std::initializer_list<Var> parts) {
  return concat_cols(std::span<const Var>(parts.begin(), parts.size()));
}

/// Row r as a 1xN tensor.
inline Var row(Var x, std::size_t r) {
  const Tensor& xv = x.value();
  if (r >= xv.rows()) throw Error(ErrorKind::ShapeMismatch, "row index out of range on " + xv.shape_string());
  auto src = xv.row(r);
  Tensor out(1, xv.cols(), std::vector<double>(src.begin(), src.end()));
  return x.tape->record(std::move(out), {x}, [x, r](Tape& t, NodeId, const Tensor& g) {
    auto dst = t.grad_ref(x.id).row(r);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += g[c];
  });
}

/// Vertical concatenation of 1xN rows into a TxN tensor.
inline Var stack_rows(std::span<const Var> rows) {
  if (rows.empty()) throw Error(ErrorKind::ShapeMismatch, "stack_rows of nothing");
  const std::size_t cols = rows[0].cols();
  Tensor out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    detail::require_same_tape(rows[0], rows[r]);
    const Tensor& v = rows[r].value();
    if (v.rows() != 1 || v.cols() != cols) throw Error(ErrorKind::ShapeMismatch, "stack_rows expects 1xN rows");
    std::copy(v.span().begin(), v.span().end(), out.row(r).begin());
  }
  std::vector<Var> ins(rows.begin(), rows.end());
  return rows[0].tape->record(std::move(out), rows, [ins](Tape& t, NodeId, const Tensor& g) {
    for (std::size_t r = 0; r < ins.size(); ++r) {
      if (!t.requires_grad(ins[r].id)) continue;
      Tensor& d = t.grad_ref(ins[r].id);
      auto src = g.row(r);
      for (std::size_t c = 0; c < src.size(); ++c) d[c] += src[c];
    }
  });
}

/// Single entry as a 1x1 tensor.
inline Var pick(Var x, std::size_t r, std::size_t c) {
  const Tensor& xv = x.value();
  if (r >= xv.rows() || c >= xv.cols()) throw Error(ErrorKind::ShapeMismatch, "pick out of range");
  return x.tape->record(Tensor(1, 1, xv(r, c)), {x}, [x, r, c](Tape& t, NodeId, const Tensor& g) {
    t.grad_ref(x.id)(r, c) += g[0];
  });
}

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }

// ---------------------------------------------------------------------------
// Finite-difference gradient check

/// Relative discrepancy used by grad_check.
inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

struct GradCheckOptions {
  double eps = 1e-5;
  /// Coordinates probed per tensor; 0 probes all of them.
  std::size_t max_coords_per_tensor = 0;
  std::uint64_t seed = 0;
  /// Coordinates with max(|analytic|, |numeric|) below this are also
  /// tallied separately; their numeric estimate is dominated by rounding.
  double resolution_floor = 1e-6;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
  std::size_t worst_tensor = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  /// Max relative error over coordinates at or above the resolution floor.
  double max_rel_error_resolved = 0.0;
  std::size_t unresolved_coords = 0;
};

/// Scalar objective built on a fresh tape from the given parameter vars.
using Objective = std::function<Var(Tape&, std::span<const Var>)>;

/// Compares tape gradients with central differences
/// (f(θ+eps) − f(θ−eps)) / (2·eps). Parameters are perturbed in place and
/// restored before returning.
inline GradCheckResult grad_check(const Objective& f, std::span<Tensor* const> params,
                                  const GradCheckOptions& opts = {}) {
  auto evaluate = [&](bool recording, std::vector<Tensor>* grads) {
    Tape tape(recording);
    std::vector<Var> vars;
    vars.reserve(params.size());
    for (Tensor* p : params) vars.push_back(tape.parameter(*p));
    Var loss = f(tape, vars);
    if (grads) {
      tape.backward(loss);
      for (const Var& v : vars) grads->push_back(tape.grad(v));
    }
    const Tensor& lv = loss.value();
    if (lv.size() != 1) throw Error(ErrorKind::NotScalarLoss, "objective is " + lv.shape_string());
    return lv[0];
  };

  std::vector<Tensor> analytic;
  evaluate(true, &analytic);

  GradCheckResult result;
  Rng rng(opts.seed);
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& theta = *params[p];
    std::vector<std::size_t> coords(theta.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (opts.max_coords_per_tensor && coords.size() > opts.max_coords_per_tensor) {
      rng.shuffle(coords);
      coords.resize(opts.max_coords_per_tensor);
    }
    for (std::size_t i : coords) {
      const double saved = theta[i];
      theta[i] = saved + opts.eps;
      const double up = evaluate(false, nullptr);
      theta[i] = saved - opts.eps;
      const double down = evaluate(false, nullptr);
      theta[i] = saved;
      const double numeric = (up - down) / (2.0 * opts.eps);
      const double a = analytic[p][i];
      const double err = relative_error(a, numeric);
      ++result.coords_checked;
      if (std::max(std::abs(a), std::abs(numeric)) < opts.resolution_floor) {
        ++result.unresolved_coords;
      } else {
        result.max_rel_error_resolved = std::max(result.max_rel_error_resolved, err);
      }
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_tensor = p;
        result.worst_index = i;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace urlgnn
