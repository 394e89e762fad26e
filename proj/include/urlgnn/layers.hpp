// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Graph aggregation, graph attention and LSTM layers on top of the tape.
//
// Parameter structs own Tensors; the matching *Vars structs hold the same
// parameters bound to a tape for one forward pass.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "urlgnn/autodiff.hpp"
#include "urlgnn/encoder.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/rng.hpp"
#include "urlgnn/tensor.hpp"

namespace urlgnn {

inline constexpr double kLeakySlope = 0.2;

/// In-neighbourhoods in CSR form. Every node lists itself (self-loop) after
/// its in-neighbours from the edge list, unless the edge list already holds
/// that self-loop.
struct Neighborhoods {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> offsets;  // num_nodes + 1
  std::vector<std::size_t> sources;

  std::size_t degree(std::size_t i) const { return offsets[i + 1] - offsets[i]; }

  static Neighborhoods build(std::size_t num_nodes, const std::vector<Edge>& edges) {
    Neighborhoods nb;
    nb.num_nodes = num_nodes;
    std::vector<std::vector<std::size_t>> lists(num_nodes);
    for (const Edge& e : edges) {
      if (e.src >= num_nodes || e.dst >= num_nodes) {
        throw Error(ErrorKind::ShapeMismatch, "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                                                  ") out of range for " + std::to_string(num_nodes) + " nodes");
      }
      lists[e.dst].push_back(e.src);
    }
    nb.offsets.reserve(num_nodes + 1);
    nb.offsets.push_back(0);
    for (std::size_t i = 0; i < num_nodes; ++i) {
      bool has_self = false;
      for (std::size_t s : lists[i]) has_self = has_self || s == i;
      if (!has_self) lists[i].push_back(i);
      nb.sources.insert(nb.sources.end(), lists[i].begin(), lists[i].end());
      nb.offsets.push_back(nb.sources.size());
    }
    return nb;
  }
};

/// Xavier/Glorot uniform fill in ±sqrt(6 / (fan_in + fan_out)).
inline void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.span()) v = rng.uniform(-bound, bound);
}

// ---------------------------------------------------------------------------
// Degree-normalised graph aggregation

enum class AggregationMode { SymNorm, Mean };

struct GnnLayerParams {
  Tensor weight;  // F_in x F_out
  Tensor bias;    // 1 x F_out

  static GnnLayerParams init(std::size_t in, std::size_t out, Rng& rng) {
    GnnLayerParams p{Tensor(in, out), Tensor(1, out)};
    glorot_uniform(p.weight, in, out, rng);
    return p;
  }
};

struct GnnLayerVars {
  Var weight;
  Var bias;
};

inline GnnLayerVars bind(Tape& tape, const GnnLayerParams& p) {
  return {tape.parameter(p.weight), tape.parameter(p.bias)};
}

/// Per-edge coefficients aligned with nb.sources.
inline std::vector<double> aggregation_coefficients(const Neighborhoods& nb, AggregationMode mode) {
  std::vector<double> coeff(nb.sources.size());
  for (std::size_t i = 0; i < nb.num_nodes; ++i) {
    const double di = static_cast<double>(nb.degree(i));
    for (std::size_t k = nb.offsets[i]; k < nb.offsets[i + 1]; ++k) {
      const double dj = static_cast<double>(nb.degree(nb.sources[k]));
      coeff[k] = mode == AggregationMode::SymNorm ? 1.0 / std::sqrt(di * dj) : 1.0 / di;
    }
  }
  return coeff;
}

/// out_i = sum_k coeff_k * x_{source_k} over i's neighbourhood.
inline Var propagate(Var x, const Neighborhoods& nb, std::vector<double> coeff) {
  const Tensor& xv = x.value();
  if (xv.rows() != nb.num_nodes) {
    throw Error(ErrorKind::ShapeMismatch, "propagate: " + std::to_string(nb.num_nodes) + " nodes vs features " +
                                              xv.shape_string());
  }
  const std::size_t width = xv.cols();
  Tensor out(xv.rows(), width);
  for (std::size_t i = 0; i < nb.num_nodes; ++i) {
    auto o = out.row(i);
    for (std::size_t k = nb.offsets[i]; k < nb.offsets[i + 1]; ++k) {
      auto src = xv.row(nb.sources[k]);
      const double w = coeff[k];
      for (std::size_t c = 0; c < width; ++c) o[c] += w * src[c];
    }
  }
  return x.tape->record(std::move(out), {x}, [x, nb, coeff = std::move(coeff)](Tape& t, NodeId, const Tensor& g) {
    Tensor& dx = t.grad_ref(x.id);
    const std::size_t width = g.cols();
    for (std::size_t i = 0; i < nb.num_nodes; ++i) {
      auto gi = g.row(i);
      for (std::size_t k = nb.offsets[i]; k < nb.offsets[i + 1]; ++k) {
        auto d = dx.row(nb.sources[k]);
        const double w = coeff[k];
        for (std::size_t c = 0; c < width; ++c) d[c] += w * gi[c];
      }
    }
  });
}

/// z_i = relu(sum_{j in N(i) ∪ {i}} c_ij x_j W + b), with c_ij = 1/sqrt(d_i d_j)
/// (SymNorm) or 1/d_i (Mean), degrees counting the self-loop.
inline Var gnn_forward(Var features, const Neighborhoods& nb, const GnnLayerVars& p,
                       AggregationMode mode = AggregationMode::SymNorm) {
  if (features.cols() != p.weight.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                "gnn_forward: features " + features.value().shape_string() + " vs W " + p.weight.value().shape_string());
  }
  Var transformed = matmul(features, p.weight);
  Var aggregated = propagate(transformed, nb, aggregation_coefficients(nb, mode));
  return relu(add_row(aggregated, p.bias));
}

// ---------------------------------------------------------------------------
// Multi-head graph attention

struct GatLayerParams {
  std::vector<Tensor> weight;     // per head: F_in x F_head
  std::vector<Tensor> attention;  // per head: 2*F_head x 1; first half scores the target node
  bool concat = true;

  std::size_t heads() const noexcept { return weight.size(); }
  std::size_t head_width() const { return weight.at(0).cols(); }
  std::size_t output_width() const { return concat ? heads() * head_width() : head_width(); }

  static GatLayerParams init(std::size_t in, std::size_t head_width, std::size_t heads, bool concat, Rng& rng) {
    if (heads == 0) throw Error(ErrorKind::ShapeMismatch, "GAT layer needs at least one head");
    GatLayerParams p;
    p.concat = concat;
    for (std::size_t h = 0; h < heads; ++h) {
      Tensor w(in, head_width);
      glorot_uniform(w, in, head_width, rng);
      Tensor a(2 * head_width, 1);
      glorot_uniform(a, 2 * head_width, 1, rng);
      p.weight.push_back(std::move(w));
      p.attention.push_back(std::move(a));
    }
    return p;
  }
};

struct GatLayerVars {
  std::vector<Var> weight;
  std::vector<Var> attention;
  bool concat = true;
};

inline GatLayerVars bind(Tape& tape, const GatLayerParams& p) {
  GatLayerVars v;
  v.concat = p.concat;
  for (const Tensor& w : p.weight) v.weight.push_back(tape.parameter(w));
  for (const Tensor& a : p.attention) v.attention.push_back(tape.parameter(a));
  return v;
}

/// Attention coefficients of one head, aligned with Neighborhoods::sources.
using AttentionWeights = std::vector<double>;

/// One attention head over projected features wh (L x F):
///   e_ij = LeakyReLU(a_dst·wh_i + a_src·wh_j), alpha_i. = softmax over N(i),
///   out_i = sum_j alpha_ij wh_j.
/// `a` is 2F x 1 with the target-node half first.
inline Var attention_aggregate(Var wh, Var a, const Neighborhoods& nb, double slope = kLeakySlope,
                               AttentionWeights* alpha_out = nullptr) {
  detail::require_same_tape(wh, a);
  const Tensor& whv = wh.value();
  const Tensor& av = a.value();
  const std::size_t n = whv.rows();
  const std::size_t f = whv.cols();
  if (av.rows() != 2 * f || av.cols() != 1) {
    throw Error(ErrorKind::ShapeMismatch, "attention vector " + av.shape_string() + " for head width " + std::to_string(f));
  }
  if (n != nb.num_nodes) throw Error(ErrorKind::ShapeMismatch, "attention: node count mismatch");

  std::vector<double> target_score(n), source_score(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = whv.row(i);
    double u = 0.0, v = 0.0;
    for (std::size_t c = 0; c < f; ++c) {
      u += r[c] * av[c];
      v += r[c] * av[f + c];
    }
    target_score[i] = u;
    source_score[i] = v;
  }

  std::vector<double> logits(nb.sources.size());
  std::vector<double> alpha(nb.sources.size());
  Tensor out(n, f);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = nb.offsets[i], end = nb.offsets[i + 1];
    if (begin == end) throw Error(ErrorKind::ShapeMismatch, "node " + std::to_string(i) + " has no neighbours");
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = begin; k < end; ++k) {
      logits[k] = target_score[i] + source_score[nb.sources[k]];
      const double e = logits[k] > 0.0 ? logits[k] : slope * logits[k];
      alpha[k] = e;
      m = std::max(m, e);
    }
    double s = 0.0;
    for (std::size_t k = begin; k < end; ++k) s += (alpha[k] = std::exp(alpha[k] - m));
    auto o = out.row(i);
    for (std::size_t k = begin; k < end; ++k) {
      alpha[k] /= s;
      auto src = whv.row(nb.sources[k]);
      for (std::size_t c = 0; c < f; ++c) o[c] += alpha[k] * src[c];
    }
  }
  if (alpha_out) *alpha_out = alpha;

  return wh.tape->record(
      std::move(out), {wh, a},
      [wh, a, nb, slope, logits = std::move(logits), alpha = std::move(alpha)](Tape& t, NodeId, const Tensor& g) {
        const Tensor& whv = t.value(wh.id);
        const Tensor& av = t.value(a.id);
        const std::size_t n = whv.rows();
        const std::size_t f = whv.cols();
        const bool need_wh = t.requires_grad(wh.id);
        std::vector<double> d_target(n, 0.0), d_source(n, 0.0);
        Tensor* dwh = need_wh ? &t.grad_ref(wh.id) : nullptr;
        std::vector<double> dalpha;
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t begin = nb.offsets[i], end = nb.offsets[i + 1];
          auto gi = g.row(i);
          dalpha.assign(end - begin, 0.0);
          double weighted = 0.0;
          for (std::size_t k = begin; k < end; ++k) {
            auto src = whv.row(nb.sources[k]);
            double d = 0.0;
            for (std::size_t c = 0; c < f; ++c) d += gi[c] * src[c];
            dalpha[k - begin] = d;
            weighted += alpha[k] * d;
            if (dwh) {
              auto dst = dwh->row(nb.sources[k]);
              for (std::size_t c = 0; c < f; ++c) dst[c] += alpha[k] * gi[c];
            }
          }
          for (std::size_t k = begin; k < end; ++k) {
            const double de = alpha[k] * (dalpha[k - begin] - weighted);
            const double dp = de * (logits[k] > 0.0 ? 1.0 : slope);
            d_target[i] += dp;
            d_source[nb.sources[k]] += dp;
          }
        }
        if (dwh) {
          for (std::size_t i = 0; i < n; ++i) {
            auto dst = dwh->row(i);
            for (std::size_t c = 0; c < f; ++c) dst[c] += d_target[i] * av[c] + d_source[i] * av[f + c];
          }
        }
        if (t.requires_grad(a.id)) {
          Tensor& da = t.grad_ref(a.id);
          for (std::size_t i = 0; i < n; ++i) {
            auto r = whv.row(i);
            for (std::size_t c = 0; c < f; ++c) {
              da[c] += d_target[i] * r[c];
              da[f + c] += d_source[i] * r[c];
            }
          }
        }
      });
}

/// Per head: h_i = relu(sum_j alpha_ij z_j W_h); heads concatenated or
/// averaged. Self-loops are part of every neighbourhood.
inline Var gat_forward(Var features, const Neighborhoods& nb, const GatLayerVars& p,
                       std::vector<AttentionWeights>* alpha_out = nullptr, double slope = kLeakySlope) {
  if (p.weight.empty() || p.weight.size() != p.attention.size()) {
    throw Error(ErrorKind::ShapeMismatch, "gat_forward: inconsistent head parameters");
  }
  if (alpha_out) alpha_out->assign(p.weight.size(), {});
  std::vector<Var> heads;
  heads.reserve(p.weight.size());
  for (std::size_t h = 0; h < p.weight.size(); ++h) {
    if (features.cols() != p.weight[h].rows()) {
      throw Error(ErrorKind::ShapeMismatch, "gat_forward: features " + features.value().shape_string() + " vs W " +
                                                p.weight[h].value().shape_string());
    }
    Var wh = matmul(features, p.weight[h]);
    heads.push_back(relu(attention_aggregate(wh, p.attention[h], nb, slope, alpha_out ? &(*alpha_out)[h] : nullptr)));
  }
  if (heads.size() == 1) return heads[0];
  if (p.concat) return concat_cols(heads);
  Var acc = heads[0];
  for (std::size_t h = 1; h < heads.size(); ++h) acc = add(acc, heads[h]);
  return scale(acc, 1.0 / static_cast<double>(heads.size()));
}

// ---------------------------------------------------------------------------
// LSTM
//
// Gate matrices are packed column-wise in the order f, i, o, c (candidate):
// columns [0,H) forget, [H,2H) input, [2H,3H) output, [3H,4H) candidate.

struct LstmLayerParams {
  Tensor input_weight;      // D x 4H
  Tensor recurrent_weight;  // H x 4H
  Tensor bias;              // 1 x 4H

  std::size_t hidden() const noexcept { return recurrent_weight.rows(); }

  static LstmLayerParams init(std::size_t in, std::size_t hidden, Rng& rng) {
    LstmLayerParams p{Tensor(in, 4 * hidden), Tensor(hidden, 4 * hidden), Tensor(1, 4 * hidden)};
    // Each gate block is a D x H (or H x H) matrix in its own right.
    glorot_uniform(p.input_weight, in, hidden, rng);
    glorot_uniform(p.recurrent_weight, hidden, hidden, rng);
    return p;
  }
};

struct LstmParams {
  std::vector<LstmLayerParams> layers;

  static LstmParams init(std::size_t in, std::size_t hidden, std::size_t num_layers, Rng& rng) {
    LstmParams p;
    for (std::size_t l = 0; l < num_layers; ++l) p.layers.push_back(LstmLayerParams::init(l == 0 ? in : hidden, hidden, rng));
    return p;
  }
};

struct LstmLayerVars {
  Var input_weight;
  Var recurrent_weight;
  Var bias;
};

struct LstmVars {
  std::vector<LstmLayerVars> layers;
};

inline LstmLayerVars bind(Tape& tape, const LstmLayerParams& p) {
  return {tape.parameter(p.input_weight), tape.parameter(p.recurrent_weight), tape.parameter(p.bias)};
}

inline LstmVars bind(Tape& tape, const LstmParams& p) {
  LstmVars v;
  for (const auto& l : p.layers) v.layers.push_back(bind(tape, l));
  return v;
}

struct LstmStep {
  Var h;
  Var c;
  Var forget;
  Var input;
  Var output;
  Var candidate;
};

/// Gate nonlinearities and state update from packed pre-activations (1 x 4H).
inline LstmStep lstm_cell(Var pre, Var c_prev) {
  const std::size_t hidden = c_prev.cols();
  if (pre.cols() != 4 * hidden || pre.rows() != 1 || c_prev.rows() != 1) {
    throw Error(ErrorKind::ShapeMismatch,
                "lstm_cell: pre " + pre.value().shape_string() + " vs state " + c_prev.value().shape_string());
  }
  Var gates = sigmoid(slice_cols(pre, 0, 3 * hidden));
  LstmStep s;
  s.forget = slice_cols(gates, 0, hidden);
  s.input = slice_cols(gates, hidden, hidden);
  s.output = slice_cols(gates, 2 * hidden, hidden);
  s.candidate = tanh(slice_cols(pre, 3 * hidden, hidden));
  s.c = add(mul(s.forget, c_prev), mul(s.input, s.candidate));
  s.h = mul(s.output, tanh(s.c));
  return s;
}

/// f = σ(xW_f + hU_f + b_f), i and o alike, c~ = tanh(xW_c + hU_c + b_c),
/// c_t = f⊙c_prev + i⊙c~, h_t = o⊙tanh(c_t).
inline LstmStep lstm_step(Var x, Var h_prev, Var c_prev, const LstmLayerVars& p) {
  if (x.rows() != 1 || x.cols() != p.input_weight.rows() || h_prev.cols() != p.recurrent_weight.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "lstm_step: x " + x.value().shape_string() + ", h " +
                                              h_prev.value().shape_string() + ", W " +
                                              p.input_weight.value().shape_string());
  }
  Var pre = add_row(add(matmul(x, p.input_weight), matmul(h_prev, p.recurrent_weight)), p.bias);
  return lstm_cell(pre, c_prev);
}

/// Runs each layer over t = 0..T-1 from zero state and feeds its hidden
/// sequence to the next layer. Returns the last layer's T x H hidden states.
inline Var lstm_sequence(Var seq, const LstmVars& p) {
  if (seq.rows() == 0) throw Error(ErrorKind::ShapeMismatch, "lstm_sequence: empty sequence");
  Tape& tape = *seq.tape;
  Var input = seq;
  for (const LstmLayerVars& layer : p.layers) {
    if (input.cols() != layer.input_weight.rows()) {
      throw Error(ErrorKind::ShapeMismatch, "lstm_sequence: input " + input.value().shape_string() + " vs W " +
                                                layer.input_weight.value().shape_string());
    }
    const std::size_t hidden = layer.recurrent_weight.rows();
    // Input projections for all steps at once.
    Var projected = add_row(matmul(input, layer.input_weight), layer.bias);
    Var h = tape.constant(Tensor(1, hidden));
    Var c = tape.constant(Tensor(1, hidden));
    std::vector<Var> hs;
    hs.reserve(input.rows());
    for (std::size_t t = 0; t < input.rows(); ++t) {
      Var pre = add(row(projected, t), matmul(h, layer.recurrent_weight));
      LstmStep s = lstm_cell(pre, c);
      h = s.h;
      c = s.c;
      hs.push_back(h);
    }
    input = stack_rows(hs);
  }
  return input;
}

// ---------------------------------------------------------------------------
// Readout helpers

inline Var mean_pool(Var features) {
  if (features.rows() == 0) throw Error(ErrorKind::EmptyGraph, "mean_pool over zero nodes");
  return mean_rows(features);
}

/// x W + b.
inline Var linear_forward(Var x, Var weight, Var bias) {
  if (x.cols() != weight.rows() || bias.cols() != weight.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "linear: x " + x.value().shape_string() + ", W " +
                                              weight.value().shape_string() + ", b " + bias.value().shape_string());
  }
  return add_row(matmul(x, weight), bias);
}

}  // namespace urlgnn
