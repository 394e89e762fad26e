// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Mini-batch training with mean NLL loss, Adam and a step learning-rate
// schedule.
//
// Results are independent of the thread count: each example's gradient is
// computed on its own tape and the batch gradient sums them in batch order.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "urlgnn/checkpoint.hpp"
#include "urlgnn/data.hpp"
#include "urlgnn/inference.hpp"
#include "urlgnn/model.hpp"
#include "urlgnn/optim.hpp"
#include "urlgnn/parallel.hpp"

namespace urlgnn {

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  double gamma = 0.5;
  std::size_t step_size = 5;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  /// Per-epoch and final checkpoints go here when set.
  std::optional<std::filesystem::path> checkpoint_dir;
  /// Stored in every checkpoint's "run" metadata.
  nlohmann::json run_metadata = nlohmann::json::object();
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based in logs
  double loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double lr = 0.0;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;

  /// `epoch,loss,train_acc,test_acc,lr,seconds`; timing column omitted on request.
  void write_csv(std::ostream& out, bool with_timing = true) const {
    out << "epoch,loss,train_acc,test_acc,lr" << (with_timing ? ",seconds" : "") << '\n';
    for (const auto& e : epochs) {
      out << e.epoch << ',' << format(e.loss) << ',' << format(e.train_acc) << ',' << format(e.test_acc) << ','
          << format(e.lr);
      if (with_timing) out << ',' << std::fixed << std::setprecision(3) << e.seconds << std::defaultfloat;
      out << '\n';
    }
  }

  static std::string format(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
  }
};

struct TrainResult {
  ModelParams params;
  TrainLog log;
};

/// Loss of one example; adds its gradient into `grads`.
inline double example_gradient(const UrlGraph& graph, int label, const ModelParams& params, const ModelConfig& config,
                               ModelParams& grads) {
  Tape tape;
  ModelVars vars = bind(tape, params);
  Var loss = nll_loss(forward(tape, vars, graph, config), label);
  tape.backward(loss);
  accumulate_grads(tape, vars, grads);
  return loss.value()[0];
}

using EpochCallback = std::function<void(const EpochLog&)>;

inline std::filesystem::path epoch_checkpoint_path(const std::filesystem::path& dir, std::size_t epoch) {
  std::ostringstream name;
  name << "epoch_" << std::setw(3) << std::setfill('0') << epoch << ".ckpt";
  return dir / name.str();
}

inline std::filesystem::path final_checkpoint_path(const std::filesystem::path& dir) { return dir / "model.ckpt"; }

/// Trains from `initial` (or init_params(model)) on `train_set`, reporting
/// accuracy on the original (non-synthetic) training records and on `test_set`
/// after every epoch.
inline TrainResult train(const Corpus& train_set, const Corpus& test_set, const ModelConfig& model,
                         const TrainConfig& cfg, std::optional<ModelParams> initial = std::nullopt,
                         const EpochCallback& on_epoch = {}) {
  if (train_set.size() == 0) throw Error(ErrorKind::TooFewSamples, "training set is empty");
  model.validate();
  TrainResult result{initial ? std::move(*initial) : init_params(model), {}};
  ModelParams& params = result.params;
  OptimizerState state(params);

  Corpus train_eval;
  for (const auto& r : train_set.records) {
    if (r.provenance == Provenance::Original) train_eval.records.push_back(r);
  }

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> losses(train_set.size(), 0.0);
  std::vector<ModelParams> per_example;
  const bool parallel = cfg.threads > 1;
  if (parallel) per_example.assign(cfg.batch_size, params.zeros_like());
  ModelParams batch_grad = params.zeros_like();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const double lr = lr_at(epoch, cfg.lr, cfg.gamma, cfg.step_size);
    for (const auto& batch : batches(order, cfg.batch_size, cfg.seed, epoch)) {
      batch_grad.for_each([](const std::string&, Tensor& t) { t.fill(0.0); });
      auto run_example = [&](std::size_t k, ModelParams& sink) {
        const Record& r = train_set.records[batch[k]];
        try {
          losses[batch[k]] = example_gradient(encode_url(r.url, default_charset(), model.extended_features()),
                                              r.label, params, model, sink);
        } catch (const Error& e) {
          throw Error(e.kind(), "epoch " + std::to_string(epoch + 1) + ", record " + std::to_string(batch[k]) +
                                    ": " + e.what());
        }
      };
      if (parallel) {
        parallel_for(batch.size(), cfg.threads, [&](std::size_t k) {
          per_example[k].for_each([](const std::string&, Tensor& t) { t.fill(0.0); });
          run_example(k, per_example[k]);
        });
        auto dst = batch_grad.tensors();
        for (std::size_t k = 0; k < batch.size(); ++k) {
          auto src = per_example[k].tensors();
          for (std::size_t i = 0; i < dst.size(); ++i) {
            for (std::size_t j = 0; j < dst[i]->size(); ++j) (*dst[i])[j] += (*src[i])[j];
          }
        }
      } else {
        for (std::size_t k = 0; k < batch.size(); ++k) run_example(k, batch_grad);
      }
      const double inv = 1.0 / static_cast<double>(batch.size());
      batch_grad.for_each([inv](const std::string&, Tensor& t) {
        for (double& v : t.span()) v *= inv;
      });
      adam_step(params, batch_grad, state, lr);
    }

    EpochLog log;
    log.epoch = epoch + 1;
    log.lr = lr;
    double total = 0.0;
    for (double l : losses) total += l;
    log.loss = total / static_cast<double>(losses.size());
    log.train_acc = accuracy(train_eval, predict_corpus(train_eval, params, model, cfg.threads));
    log.test_acc = test_set.size() ? accuracy(test_set, predict_corpus(test_set, params, model, cfg.threads)) : 0.0;
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.epochs.push_back(log);
    if (cfg.checkpoint_dir) {
      write_checkpoint(epoch_checkpoint_path(*cfg.checkpoint_dir, log.epoch), model, params, cfg.run_metadata);
    }
    if (on_epoch) on_epoch(log);
  }
  if (cfg.checkpoint_dir) write_checkpoint(final_checkpoint_path(*cfg.checkpoint_dir), model, params, cfg.run_metadata);
  return result;
}

}  // namespace urlgnn
