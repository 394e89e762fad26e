// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// The GNN-GAT-LSTM classifier:
//   gnn1 -> gnn2 -> gat1 (4 heads, concat) -> gat2 (1 head) -> readout -> fc -> log-softmax
// where the readout runs a 2-layer LSTM over the node embeddings in
// character order and keeps the last hidden state, or mean-pools them.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "urlgnn/autodiff.hpp"
#include "urlgnn/encoder.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/layers.hpp"
#include "urlgnn/rng.hpp"

namespace urlgnn {

inline constexpr std::size_t kNumClasses = 4;
inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {"benign", "defacement", "malware",
                                                                           "phishing"};

enum class Readout { Lstm, Mean };

inline std::string to_string(AggregationMode m) { return m == AggregationMode::SymNorm ? "sym_norm" : "mean"; }
inline std::string to_string(Readout r) { return r == Readout::Lstm ? "lstm" : "mean"; }

inline AggregationMode parse_aggregation(std::string_view s) {
  if (s == "sym_norm") return AggregationMode::SymNorm;
  if (s == "mean") return AggregationMode::Mean;
  throw Error(ErrorKind::BadConfig, "aggregation must be sym_norm or mean, got '" + std::string(s) + "'");
}

inline Readout parse_readout(std::string_view s) {
  if (s == "lstm") return Readout::Lstm;
  if (s == "mean") return Readout::Mean;
  throw Error(ErrorKind::BadConfig, "readout must be lstm or mean, got '" + std::string(s) + "'");
}

struct ModelConfig {
  std::size_t input_dim = kCharsetSize;
  std::size_t hidden = 64;
  std::size_t gat1_heads = 4;
  std::size_t gat2_heads = 1;
  std::size_t lstm_layers = 2;
  std::size_t classes = kNumClasses;
  AggregationMode aggregation = AggregationMode::SymNorm;
  Readout readout = Readout::Lstm;
  std::uint64_t seed = 42;

  bool extended_features() const noexcept { return input_dim == kExtendedWidth; }

  void validate() const {
    if (input_dim != kCharsetSize && input_dim != kExtendedWidth) {
      throw Error(ErrorKind::BadConfig, "input_dim must be 69 or 72, got " + std::to_string(input_dim));
    }
    if (classes != kNumClasses) throw Error(ErrorKind::BadConfig, "classes must be 4");
    if (hidden == 0 || gat1_heads == 0 || gat2_heads == 0 || lstm_layers == 0) {
      throw Error(ErrorKind::BadConfig, "hidden, head and layer counts must be positive");
    }
  }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"input_dim", c.input_dim},
                     {"hidden", c.hidden},
                     {"gat1_heads", c.gat1_heads},
                     {"gat2_heads", c.gat2_heads},
                     {"lstm_layers", c.lstm_layers},
                     {"classes", c.classes},
                     {"aggregation", to_string(c.aggregation)},
                     {"readout", to_string(c.readout)},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, ModelConfig& c) {
  c.input_dim = j.at("input_dim").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.gat1_heads = j.at("gat1_heads").get<std::size_t>();
  c.gat2_heads = j.at("gat2_heads").get<std::size_t>();
  c.lstm_layers = j.at("lstm_layers").get<std::size_t>();
  c.classes = j.at("classes").get<std::size_t>();
  c.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
  c.readout = parse_readout(j.at("readout").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
}

/// All learnable tensors. Also used as the container for gradients and
/// optimizer moments, which share its shapes.
struct ModelParams {
  GnnLayerParams gnn1;
  GnnLayerParams gnn2;
  GatLayerParams gat1;
  GatLayerParams gat2;
  LstmParams lstm;
  Tensor fc_weight;  // hidden x classes
  Tensor fc_bias;    // 1 x classes

  /// Visits every tensor with its stable name, always in the same order.
  template <typename Self, typename Fn>
  static void visit(Self& self, Fn&& fn) {
    fn("gnn1.W", self.gnn1.weight);
    fn("gnn1.b", self.gnn1.bias);
    fn("gnn2.W", self.gnn2.weight);
    fn("gnn2.b", self.gnn2.bias);
    for (std::size_t h = 0; h < self.gat1.weight.size(); ++h) {
      fn("gat1.h" + std::to_string(h) + ".W", self.gat1.weight[h]);
      fn("gat1.h" + std::to_string(h) + ".a", self.gat1.attention[h]);
    }
    for (std::size_t h = 0; h < self.gat2.weight.size(); ++h) {
      fn("gat2.h" + std::to_string(h) + ".W", self.gat2.weight[h]);
      fn("gat2.h" + std::to_string(h) + ".a", self.gat2.attention[h]);
    }
    for (std::size_t l = 0; l < self.lstm.layers.size(); ++l) {
      fn("lstm.l" + std::to_string(l) + ".W", self.lstm.layers[l].input_weight);
      fn("lstm.l" + std::to_string(l) + ".U", self.lstm.layers[l].recurrent_weight);
      fn("lstm.l" + std::to_string(l) + ".b", self.lstm.layers[l].bias);
    }
    fn("fc.W", self.fc_weight);
    fn("fc.b", self.fc_bias);
  }

  template <typename Fn>
  void for_each(Fn&& fn) {
    visit(*this, std::forward<Fn>(fn));
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    visit(*this, std::forward<Fn>(fn));
  }

  std::vector<Tensor*> tensors() {
    std::vector<Tensor*> out;
    for_each([&](const std::string&, Tensor& t) { out.push_back(&t); });
    return out;
  }
  std::vector<const Tensor*> tensors() const {
    std::vector<const Tensor*> out;
    for_each([&](const std::string&, const Tensor& t) { out.push_back(&t); });
    return out;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for_each([&](const std::string& n, const Tensor&) { out.push_back(n); });
    return out;
  }

  /// Same structure, all entries zero.
  ModelParams zeros_like() const {
    ModelParams z = *this;
    z.for_each([](const std::string&, Tensor& t) { t.fill(0.0); });
    return z;
  }

  bool all_finite() const {
    bool ok = true;
    for_each([&](const std::string&, const Tensor& t) { ok = ok && t.all_finite(); });
    return ok;
  }

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    auto ta = a.tensors();
    auto tb = b.tensors();
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i) {
      if (!(*ta[i] == *tb[i])) return false;
    }
    return a.gat1.concat == b.gat1.concat && a.gat2.concat == b.gat2.concat;
  }
};

/// Deterministic in the config seed. Weights and attention vectors are
/// Glorot-uniform, biases zero.
inline ModelParams init_params(const ModelConfig& config) {
  config.validate();
  Rng rng(config.seed);
  ModelParams p;
  p.gnn1 = GnnLayerParams::init(config.input_dim, config.input_dim, rng);
  p.gnn2 = GnnLayerParams::init(config.input_dim, config.input_dim, rng);
  p.gat1 = GatLayerParams::init(config.input_dim, config.hidden, config.gat1_heads, true, rng);
  p.gat2 = GatLayerParams::init(p.gat1.output_width(), config.hidden, config.gat2_heads, false, rng);
  p.lstm = LstmParams::init(config.hidden, config.hidden, config.lstm_layers, rng);
  p.fc_weight = Tensor(config.hidden, config.classes);
  glorot_uniform(p.fc_weight, config.hidden, config.classes, rng);
  p.fc_bias = Tensor(1, config.classes);
  return p;
}

struct ParamCount {
  std::size_t total = 0;
  std::vector<std::pair<std::string, std::size_t>> components;  // stage -> scalars
};

inline ParamCount count_params(const ModelParams& params) {
  ParamCount pc;
  params.for_each([&](const std::string& name, const Tensor& t) {
    const std::string stage = name.substr(0, name.find('.'));
    if (pc.components.empty() || pc.components.back().first != stage) pc.components.emplace_back(stage, 0);
    pc.components.back().second += t.size();
    pc.total += t.size();
  });
  return pc;
}

/// ModelParams bound to one tape.
struct ModelVars {
  GnnLayerVars gnn1;
  GnnLayerVars gnn2;
  GatLayerVars gat1;
  GatLayerVars gat2;
  LstmVars lstm;
  Var fc_weight;
  Var fc_bias;
  std::vector<Var> flat;  // ModelParams::for_each order
};

/// Rebuilds the structured view from vars listed in ModelParams::for_each
/// order; `layout` supplies head and layer counts.
inline ModelVars vars_from_flat(std::span<const Var> flat, const ModelParams& layout) {
  ModelVars v;
  v.flat.assign(flat.begin(), flat.end());
  std::size_t k = 0;
  auto next = [&]() {
    if (k >= flat.size()) throw Error(ErrorKind::ShapeMismatch, "too few vars for the model layout");
    return flat[k++];
  };
  v.gnn1.weight = next();
  v.gnn1.bias = next();
  v.gnn2.weight = next();
  v.gnn2.bias = next();
  v.gat1.concat = layout.gat1.concat;
  for (std::size_t h = 0; h < layout.gat1.heads(); ++h) {
    v.gat1.weight.push_back(next());
    v.gat1.attention.push_back(next());
  }
  v.gat2.concat = layout.gat2.concat;
  for (std::size_t h = 0; h < layout.gat2.heads(); ++h) {
    v.gat2.weight.push_back(next());
    v.gat2.attention.push_back(next());
  }
  for (std::size_t l = 0; l < layout.lstm.layers.size(); ++l) {
    LstmLayerVars lv;
    lv.input_weight = next();
    lv.recurrent_weight = next();
    lv.bias = next();
    v.lstm.layers.push_back(lv);
  }
  v.fc_weight = next();
  v.fc_bias = next();
  if (k != flat.size()) throw Error(ErrorKind::ShapeMismatch, "too many vars for the model layout");
  return v;
}

inline ModelVars bind(Tape& tape, const ModelParams& params) {
  std::vector<Var> flat;
  params.for_each([&](const std::string&, const Tensor& t) { flat.push_back(tape.parameter(t)); });
  return vars_from_flat(flat, params);
}

/// Adds the gradients from the tape's last backward pass into `grads`.
inline void accumulate_grads(const Tape& tape, const ModelVars& vars, ModelParams& grads) {
  auto dst = grads.tensors();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    Tensor g = tape.grad(vars.flat[i]);
    Tensor& d = *dst[i];
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += g[k];
  }
}

/// Log-probabilities (1 x classes) of one graph.
inline Var forward(Tape& tape, const ModelVars& vars, const UrlGraph& graph, const ModelConfig& config) {
  if (graph.num_nodes() == 0) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  if (graph.feature_width() != config.input_dim) {
    throw Error(ErrorKind::ShapeMismatch, "graph feature width " + std::to_string(graph.feature_width()) +
                                              " but model input_dim " + std::to_string(config.input_dim));
  }
  const Neighborhoods nb = Neighborhoods::build(graph.num_nodes(), graph.edges);
  Var x = tape.constant(graph.node_features);
  Var z = gnn_forward(x, nb, vars.gnn1, config.aggregation);
  z = gnn_forward(z, nb, vars.gnn2, config.aggregation);
  Var h = gat_forward(z, nb, vars.gat1);
  h = gat_forward(h, nb, vars.gat2);
  Var pooled = config.readout == Readout::Lstm ? row(lstm_sequence(h, vars.lstm), graph.num_nodes() - 1)
                                               : mean_pool(h);
  return log_softmax_rows(linear_forward(pooled, vars.fc_weight, vars.fc_bias));
}

/// Inference without gradient recording.
inline Tensor forward(const UrlGraph& graph, const ModelParams& params, const ModelConfig& config) {
  Tape tape(false);
  ModelVars vars = bind(tape, params);
  return forward(tape, vars, graph, config).value();
}

struct Prediction {
  int label = 0;
  std::array<double, kNumClasses> probabilities{};
};

/// Argmax with ties resolved to the lowest class id.
inline int argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<int>(best);
}

inline Prediction prediction_from_log_probs(const Tensor& log_probs) {
  Prediction p;
  p.label = argmax(log_probs.span());
  for (std::size_t c = 0; c < kNumClasses; ++c) p.probabilities[c] = std::exp(log_probs[c]);
  return p;
}

inline Prediction predict(const UrlGraph& graph, const ModelParams& params, const ModelConfig& config) {
  return prediction_from_log_probs(forward(graph, params, config));
}

inline Prediction predict(std::string_view url, const ModelParams& params, const ModelConfig& config,
                          const Charset& charset = default_charset()) {
  return predict(encode_url(url, charset, config.extended_features()), params, config);
}

}  // namespace urlgnn
