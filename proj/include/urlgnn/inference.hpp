// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "urlgnn/data.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/model.hpp"
#include "urlgnn/parallel.hpp"

namespace urlgnn {

/// Tape-free predictions for every record, in record order. Errors are
/// rethrown with the offending record index.
inline std::vector<Prediction> predict_corpus(const Corpus& corpus, const ModelParams& params,
                                              const ModelConfig& config, std::size_t threads = 1) {
  std::vector<Prediction> out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    try {
      out[i] = predict(corpus.records[i].url, params, config);
    } catch (const Error& e) {
      throw Error(e.kind(), "record " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

inline double accuracy(const Corpus& corpus, const std::vector<Prediction>& preds) {
  if (corpus.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) correct += preds[i].label == corpus.records[i].label;
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

}  // namespace urlgnn
