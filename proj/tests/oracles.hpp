// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used by the tests. Everything here
// works on plain nested loops over dense matrices and never touches the tape,
// the CSR neighbourhoods or the fused kernels it is compared against.

#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "urlgnn/urlgnn.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix to_matrix(const urlgnn::Tensor& t) {
  Matrix m(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = t(r, c);
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix out(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][p] * b[p][j];
  return out;
}

inline double max_abs_diff(const Matrix& a, const urlgnn::Tensor& b) {
  double d = 0.0;
  if (a.size() != b.rows()) return INFINITY;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b.cols()) return INFINITY;
    for (std::size_t c = 0; c < a[r].size(); ++c) d = std::max(d, std::abs(a[r][c] - b(r, c)));
  }
  return d;
}

/// Dense adjacency: A[i][j] = 1 when j sends to i, plus the diagonal.
inline Matrix adjacency(std::size_t n, const std::vector<urlgnn::Edge>& edges) {
  Matrix a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) a[e.dst][e.src] = 1.0;
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// relu(Â X W + b) with Â = D^-1/2 A D^-1/2 or D^-1 A.
inline Matrix gnn_layer(const Matrix& x, const Matrix& adj, const Matrix& w, const std::vector<double>& b,
                        bool symmetric) {
  const std::size_t n = adj.size();
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += adj[i][j];
  Matrix norm(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      norm[i][j] = adj[i][j] == 0.0 ? 0.0 : symmetric ? adj[i][j] / std::sqrt(deg[i] * deg[j]) : adj[i][j] / deg[i];
  Matrix out = multiply(norm, multiply(x, w));
  for (auto& row : out)
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = relu(row[c] + b[c]);
  return out;
}

struct GatHeadResult {
  Matrix out;    // before the outer relu
  Matrix alpha;  // n x n, zero off the neighbourhood
};

inline GatHeadResult gat_head(const Matrix& x, const Matrix& adj, const Matrix& w, const std::vector<double>& a,
                              double slope) {
  const Matrix wh = multiply(x, w);
  const std::size_t n = adj.size(), f = w[0].size();
  GatHeadResult r{Matrix(n, std::vector<double>(f, 0.0)), Matrix(n, std::vector<double>(n, 0.0))};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    double mx = -INFINITY;
    for (std::size_t j = 0; j < n; ++j) {
      if (adj[i][j] == 0.0) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < f; ++c) s += a[c] * wh[i][c] + a[f + c] * wh[j][c];
      e[j] = s > 0.0 ? s : slope * s;
      mx = std::max(mx, e[j]);
    }
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (adj[i][j] != 0.0) z += std::exp(e[j] - mx);
    for (std::size_t j = 0; j < n; ++j) {
      if (adj[i][j] == 0.0) continue;
      r.alpha[i][j] = std::exp(e[j] - mx) / z;
      for (std::size_t c = 0; c < f; ++c) r.out[i][c] += r.alpha[i][j] * wh[j][c];
    }
  }
  return r;
}

inline Matrix gat_layer(const Matrix& x, const Matrix& adj, const urlgnn::GatLayerParams& p, double slope) {
  std::vector<Matrix> heads;
  for (std::size_t h = 0; h < p.heads(); ++h) {
    const auto& av = p.attention[h];
    std::vector<double> a(av.span().begin(), av.span().end());
    Matrix o = gat_head(x, adj, to_matrix(p.weight[h]), a, slope).out;
    for (auto& row : o)
      for (double& v : row) v = relu(v);
    heads.push_back(std::move(o));
  }
  const std::size_t n = adj.size(), f = p.head_width();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.concat) {
      for (const auto& h : heads) out[i].insert(out[i].end(), h[i].begin(), h[i].end());
    } else {
      out[i].assign(f, 0.0);
      for (const auto& h : heads)
        for (std::size_t c = 0; c < f; ++c) out[i][c] += h[i][c] / static_cast<double>(heads.size());
    }
  }
  return out;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Step-by-step stacked LSTM from zero state, gates packed f, i, o, c.
inline Matrix lstm_unrolled(const Matrix& seq, const urlgnn::LstmParams& p) {
  Matrix input = seq;
  for (const auto& layer : p.layers) {
    const std::size_t hsz = layer.hidden(), d = layer.input_weight.rows();
    std::vector<double> h(hsz, 0.0), c(hsz, 0.0);
    Matrix hs;
    for (const auto& x : input) {
      std::vector<double> pre(4 * hsz);
      for (std::size_t g = 0; g < 4 * hsz; ++g) {
        double s = layer.bias(0, g);
        for (std::size_t k = 0; k < d; ++k) s += x[k] * layer.input_weight(k, g);
        for (std::size_t k = 0; k < hsz; ++k) s += h[k] * layer.recurrent_weight(k, g);
        pre[g] = s;
      }
      for (std::size_t u = 0; u < hsz; ++u) {
        const double f = sigmoid(pre[u]), i = sigmoid(pre[hsz + u]), o = sigmoid(pre[2 * hsz + u]);
        const double cand = std::tanh(pre[3 * hsz + u]);
        c[u] = f * c[u] + i * cand;
        h[u] = o * std::tanh(c[u]);
      }
      hs.push_back(h);
    }
    input = hs;
  }
  return input;
}

/// Probability that a random positive outscores a random negative, ties half.
inline double mann_whitney_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double wins = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    ++pos;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j]) continue;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  for (int l : labels) neg += l == 0;
  return wins / static_cast<double>(pos * neg);
}

// ---------------------------------------------------------------------------
// Random inputs

inline urlgnn::Tensor random_tensor(std::size_t r, std::size_t c, urlgnn::Rng& rng, double scale = 1.0) {
  urlgnn::Tensor t(r, c);
  for (double& v : t.span()) v = rng.uniform(-scale, scale);
  return t;
}

/// 1..max_nodes nodes with a random set of distinct directed edges
/// (occasionally including explicit self-loops).
inline std::pair<std::size_t, std::vector<urlgnn::Edge>> random_graph(std::size_t max_nodes, urlgnn::Rng& rng) {
  const std::size_t n = 1 + rng.uniform_index(max_nodes);
  std::set<std::pair<std::uint32_t, std::uint32_t>> picked;
  const std::size_t attempts = rng.uniform_index(n * n + 1);
  for (std::size_t k = 0; k < attempts; ++k) {
    const auto s = static_cast<std::uint32_t>(rng.uniform_index(n));
    const auto d = static_cast<std::uint32_t>(rng.uniform_index(n));
    if (s == d && !rng.bernoulli(0.2)) continue;
    picked.insert({s, d});
  }
  std::vector<urlgnn::Edge> edges;
  for (auto [s, d] : picked) edges.push_back({s, d});
  rng.shuffle(edges);
  return {n, edges};
}

/// Relabels node i as perm[i] in features and edges.
inline urlgnn::UrlGraph permute_graph(const urlgnn::UrlGraph& g, const std::vector<std::size_t>& perm) {
  urlgnn::UrlGraph out = g;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    auto src = g.node_features.row(i);
    auto dst = out.node_features.row(perm[i]);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  for (auto& e : out.edges) {
    e.src = static_cast<std::uint32_t>(perm[e.src]);
    e.dst = static_cast<std::uint32_t>(perm[e.dst]);
  }
  return out;
}

}  // namespace oracle
