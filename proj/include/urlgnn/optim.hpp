// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urlgnn/autodiff.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/model.hpp"

namespace urlgnn {

inline void check_target(const Tensor& log_probs, int target) {
  if (target < 0 || static_cast<std::size_t>(target) >= log_probs.cols()) {
    throw Error(ErrorKind::BadTarget, "target " + std::to_string(target) + " for " + log_probs.shape_string());
  }
}

/// -log_probs[target].
inline Var nll_loss(Var log_probs, int target) {
  check_target(log_probs.value(), target);
  return scale(pick(log_probs, 0, static_cast<std::size_t>(target)), -1.0);
}

inline double nll_loss(const Tensor& log_probs, int target) {
  check_target(log_probs, target);
  return -log_probs[static_cast<std::size_t>(target)];
}

/// Step schedule: base * gamma^floor(epoch / step), epochs counted from 0.
inline double lr_at(std::size_t epoch, double base = 1e-3, double gamma = 0.5, std::size_t step = 5) {
  if (step == 0) return base;
  return base * std::pow(gamma, static_cast<double>(epoch / step));
}

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam moments for an ordered list of parameter tensors.
struct OptimizerState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t t = 0;
  AdamOptions options;

  OptimizerState() = default;
  explicit OptimizerState(std::span<const Tensor* const> params, AdamOptions opts = {}) : options(opts) {
    for (const Tensor* p : params) {
      m.emplace_back(p->rows(), p->cols());
      v.emplace_back(p->rows(), p->cols());
    }
  }
  explicit OptimizerState(const ModelParams& params, AdamOptions opts = {})
      : OptimizerState(std::span<const Tensor* const>(params.tensors()), opts) {}
};

/// t += 1; m = b1 m + (1-b1) g; v = b2 v + (1-b2) g^2;
/// theta -= lr * m_hat / (sqrt(v_hat) + eps).
inline void adam_step(std::span<Tensor* const> params, std::span<const Tensor* const> grads, OptimizerState& state,
                      double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw Error(ErrorKind::ShapeMismatch, "adam_step: parameter, gradient and state counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(state.m[i])) {
      throw Error(ErrorKind::ShapeMismatch, "adam_step: tensor " + std::to_string(i) + " " +
                                                params[i]->shape_string() + " vs gradient " + grads[i]->shape_string());
    }
  }
  ++state.t;
  const auto& o = state.options;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& theta = *params[i];
    const Tensor& g = *grads[i];
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    for (std::size_t k = 0; k < theta.size(); ++k) {
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g[k];
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      theta[k] -= lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

inline void adam_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr) {
  auto p = params.tensors();
  auto g = grads.tensors();
  adam_step(std::span<Tensor* const>(p), std::span<const Tensor* const>(g), state, lr);
}

}  // namespace urlgnn
