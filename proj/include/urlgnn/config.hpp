// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Run configuration: a flat JSON object whose keys mirror RunConfig's
// fields. Unknown keys are rejected. Command-line flags are applied on top,
// and the resolved configuration is written next to every run's outputs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"
#include "urlgnn/data.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/model.hpp"
#include "urlgnn/synthetic.hpp"
#include "urlgnn/trainer.hpp"

namespace urlgnn {

/// Value of `dataset` that selects the built-in synthetic corpus.
inline constexpr std::string_view kSyntheticDataset = "synthetic";

struct RunConfig {
  std::string dataset = std::string(kSyntheticDataset);
  std::size_t synthetic_size = 12000;
  std::uint64_t synthetic_seed = 42;
  std::size_t subsample = 0;  // 0 keeps every record; otherwise a stratified subset
  double split_ratio = 0.8;
  std::uint64_t split_seed = 42;
  bool stratified = false;
  std::uint64_t seed = 42;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  double gamma = 0.5;
  std::size_t step_size = 5;
  std::string aggregation = "sym_norm";
  std::string readout = "lstm";
  std::size_t input_dim = 69;
  bool augment = true;
  double augment_fraction = 0.2;
  bool oversample = true;
  std::size_t oversample_target = 0;  // 0 = largest minority class after augmentation
  std::size_t threads = 1;
  std::string out_dir = "runs/latest";
  std::string checkpoint_dir;  // empty = <out_dir>/checkpoints

  ModelConfig model() const {
    ModelConfig m;
    m.input_dim = input_dim;
    m.aggregation = parse_aggregation(aggregation);
    m.readout = parse_readout(readout);
    m.seed = seed;
    m.validate();
    return m;
  }

  TrainConfig trainer() const {
    TrainConfig t;
    t.epochs = epochs;
    t.batch_size = batch_size;
    t.lr = lr;
    t.gamma = gamma;
    t.step_size = step_size;
    t.seed = seed;
    t.threads = threads;
    t.checkpoint_dir = checkpoint_path();
    return t;
  }

  std::filesystem::path checkpoint_path() const {
    return checkpoint_dir.empty() ? std::filesystem::path(out_dir) / "checkpoints" : std::filesystem::path(checkpoint_dir);
  }

  void validate() const {
    model();
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw Error(ErrorKind::BadConfig, "split_ratio must be in (0,1)");
    if (batch_size == 0) throw Error(ErrorKind::BadConfig, "batch_size must be positive");
    if (!(lr >= 0.0)) throw Error(ErrorKind::BadConfig, "lr must be non-negative");
    if (!(augment_fraction >= 0.0)) throw Error(ErrorKind::BadConfig, "augment_fraction must be non-negative");
    if (threads == 0) throw Error(ErrorKind::BadConfig, "threads must be positive");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig, dataset, synthetic_size, synthetic_seed, subsample, split_ratio,
                                   split_seed, stratified, seed, epochs, batch_size, lr, gamma, step_size, aggregation,
                                   readout, input_dim, augment, augment_fraction, oversample, oversample_target,
                                   threads, out_dir, checkpoint_dir)

/// Overlays the keys present in `j` onto `base`.
inline RunConfig merge_config(RunConfig base, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "config must be a JSON object");
  const nlohmann::json known = base;
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorKind::BadConfig, "unknown config key '" + key + "'");
  }
  nlohmann::json merged = known;
  merged.update(j);
  try {
    return merged.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadConfig, e.what());
  }
}

inline RunConfig load_config(const std::filesystem::path& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadConfig, path.string() + ": " + e.what());
  }
  return merge_config(std::move(base), j);
}

inline void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + path.string());
  out << nlohmann::json(cfg).dump(2) << '\n';
}

/// Loaded corpus, its split, and the balanced training set.
struct PreparedData {
  Corpus corpus;
  DatasetSplit split;
  Corpus train;  // originals followed by augmented and synthetic records
  Corpus test;
};

inline Corpus load_dataset(const RunConfig& cfg) {
  Corpus corpus;
  if (cfg.dataset == kSyntheticDataset) {
    corpus = generate_synthetic_corpus({.size = cfg.synthetic_size, .seed = cfg.synthetic_seed});
  } else {
    if (!std::filesystem::exists(cfg.dataset)) throw Error(ErrorKind::FileNotFound, "dataset not found: " + cfg.dataset);
    corpus = load_csv(std::filesystem::path(cfg.dataset));
  }
  if (cfg.subsample) {
    SkipCounts skipped = corpus.skipped;
    corpus = stratified_subsample(corpus, cfg.subsample, cfg.split_seed);
    corpus.skipped = skipped;
  }
  return corpus;
}

/// Balancing touches the training partition only: malware is augmented by
/// `augment_fraction`, then malware and phishing are oversampled.
inline PreparedData prepare_data(const RunConfig& cfg) {
  PreparedData d;
  d.corpus = load_dataset(cfg);
  d.split = split(d.corpus, cfg.split_ratio, cfg.split_seed, cfg.stratified);
  d.train = d.corpus.subset(d.split.train_indices);
  d.test = d.corpus.subset(d.split.test_indices);
  constexpr int kMalware = 2;
  constexpr int kPhishing = 3;
  if (cfg.augment && cfg.augment_fraction > 0.0 && d.train.class_counts()[kMalware] > 0) {
    d.train = augment_minority(d.train, kMalware, cfg.augment_fraction, cfg.seed);
  }
  if (cfg.oversample) {
    std::optional<std::size_t> target;
    if (cfg.oversample_target) target = cfg.oversample_target;
    d.train = oversample(d.train, {kMalware, kPhishing}, cfg.seed + 1, target);
  }
  return d;
}

}  // namespace urlgnn
