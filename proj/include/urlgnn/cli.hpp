// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Subcommand implementations behind tools/urlgnn.cpp. Each takes resolved
// options, writes its artifacts and progress, and throws urlgnn::Error on
// failure; run_guarded turns that into an exit code.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "urlgnn/checkpoint.hpp"
#include "urlgnn/config.hpp"
#include "urlgnn/data.hpp"
#include "urlgnn/encoder.hpp"
#include "urlgnn/metrics.hpp"
#include "urlgnn/model.hpp"
#include "urlgnn/synthetic.hpp"
#include "urlgnn/trainer.hpp"

namespace urlgnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;

/// Runs `fn`, reporting any exception on `err` as a one-line diagnostic.
inline int run_guarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitFailure;
}

/// Flags shared by every subcommand. Unset fields leave the config alone.
struct CommonOptions {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> input_dim;
  std::optional<std::string> readout;
  std::optional<std::string> aggregation;
  /// `key=value` overrides for any config key; values are parsed as JSON
  /// when possible and taken as strings otherwise.
  std::vector<std::string> set;
};

inline nlohmann::json parse_override_value(const std::string& v) {
  try {
    return nlohmann::json::parse(v);
  } catch (const nlohmann::json::exception&) {
    return v;
  }
}

/// Defaults, then the config file, then `--set` pairs, then dedicated flags.
inline RunConfig resolve_config(const CommonOptions& o, const nlohmann::json& extra = nlohmann::json::object()) {
  RunConfig cfg;
  if (o.config) cfg = load_config(*o.config);
  nlohmann::json over = nlohmann::json::object();
  for (const auto& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::BadConfig, "--set expects key=value, got '" + kv + "'");
    over[kv.substr(0, eq)] = parse_override_value(kv.substr(eq + 1));
  }
  if (o.seed) over["seed"] = *o.seed;
  if (o.out_dir) over["out_dir"] = *o.out_dir;
  if (o.threads) over["threads"] = *o.threads;
  if (o.input_dim) over["input_dim"] = *o.input_dim;
  if (o.readout) over["readout"] = *o.readout;
  if (o.aggregation) over["aggregation"] = *o.aggregation;
  over.update(extra);
  cfg = merge_config(std::move(cfg), over);
  cfg.validate();
  return cfg;
}

/// Config fields that describe the data and model, i.e. everything except
/// where outputs go and how many threads ran. Stored in checkpoints.
inline nlohmann::json provenance_json(const RunConfig& cfg) {
  nlohmann::json j = cfg;
  j.erase("out_dir");
  j.erase("checkpoint_dir");
  j.erase("threads");
  return j;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeOptions {
  std::string input;
  std::string output;  // summary JSON path
  std::size_t dump = 0;  // graphs written to <output>.graphs.jsonl
  std::size_t input_dim = kCharsetSize;
};

inline nlohmann::json encode_summary(const Corpus& corpus, std::size_t input_dim, std::size_t dump,
                                     std::ostream* dump_out) {
  const bool extended = input_dim == kExtendedWidth;
  std::map<std::string, std::size_t> histogram;
  for (int b = 0; b < 10; ++b) histogram[std::to_string(b * 10 + 1) + "-" + std::to_string(b * 10 + 10)] = 0;
  std::size_t total_chars = 0, oov = 0, truncated = 0, edges_min = SIZE_MAX, edges_max = 0, edges_sum = 0;
  std::size_t encoded = 0, failed = 0;
  for (const auto& r : corpus.records) {
    UrlGraph g;
    try {
      g = encode_url(r.url, default_charset(), extended);
    } catch (const Error&) {
      ++failed;
      continue;
    }
    ++encoded;
    const std::size_t len = g.num_nodes();
    truncated += decode_utf8(trim(r.url)).size() > kMaxUrlLength;
    total_chars += len;
    oov += g.out_of_charset;
    edges_min = std::min(edges_min, g.edges.size());
    edges_max = std::max(edges_max, g.edges.size());
    edges_sum += g.edges.size();
    const std::size_t bucket = (len - 1) / 10;
    ++histogram[std::to_string(bucket * 10 + 1) + "-" + std::to_string(bucket * 10 + 10)];
    if (dump_out && encoded <= dump) {
      nlohmann::json gj;
      gj["url"] = canonicalize(r.url);
      gj["label"] = label_name(r.label);
      std::vector<int> nodes;
      for (std::size_t i = 0; i < len; ++i) {
        auto row = g.node_features.row(i).first(kCharsetSize);
        auto it = std::find(row.begin(), row.end(), 1.0);
        nodes.push_back(it == row.end() ? -1 : static_cast<int>(it - row.begin()));
      }
      gj["nodes"] = nodes;
      std::vector<std::array<std::uint32_t, 2>> edges;
      for (const auto& e : g.edges) edges.push_back({e.src, e.dst});
      gj["edges"] = edges;
      gj["graph_features"] = {g.graph_features.packet_size_ratio, g.graph_features.repetition,
                              g.graph_features.special_density};
      *dump_out << gj.dump() << '\n';
    }
  }
  nlohmann::json s;
  s["count"] = encoded;
  s["failed"] = failed;
  s["skipped"] = {{"malformed", corpus.skipped.malformed},
                  {"unknown_label", corpus.skipped.unknown_label},
                  {"empty_url", corpus.skipped.empty_url}};
  const auto counts = corpus.class_counts();
  for (std::size_t c = 0; c < kNumClasses; ++c) s["class_counts"][std::string(kClassNames[c])] = counts[c];
  s["length_histogram"] = histogram;
  s["truncated"] = truncated;
  s["edges"] = {{"min", encoded ? edges_min : 0},
                {"max", edges_max},
                {"mean", encoded ? static_cast<double>(edges_sum) / static_cast<double>(encoded) : 0.0}};
  s["total_chars"] = total_chars;
  s["oov_chars"] = oov;
  s["oov_rate"] = total_chars ? static_cast<double>(oov) / static_cast<double>(total_chars) : 0.0;
  s["feature_width"] = extended ? kExtendedWidth : kCharsetSize;
  return s;
}

inline int cmd_encode(const EncodeOptions& o, std::ostream& out) {
  if (o.input_dim != kCharsetSize && o.input_dim != kExtendedWidth) {
    throw Error(ErrorKind::BadConfig, "input_dim must be 69 or 72");
  }
  const Corpus corpus = load_csv(std::filesystem::path(o.input));
  std::ofstream dump_file;
  if (o.dump) {
    dump_file.open(o.output + ".graphs.jsonl", std::ios::trunc);
    if (!dump_file) throw Error(ErrorKind::FileNotFound, "cannot write " + o.output + ".graphs.jsonl");
  }
  const nlohmann::json summary = encode_summary(corpus, o.input_dim, o.dump, o.dump ? &dump_file : nullptr);
  const std::filesystem::path path(o.output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorKind::FileNotFound, "cannot write " + o.output);
  f << summary.dump(2) << '\n';
  out << "encoded " << summary["count"] << " urls (skipped " << corpus.skipped.total() << ", oov rate "
      << summary["oov_rate"] << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

inline int cmd_train(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  save_config(dir / "config.json", cfg);

  const PreparedData data = prepare_data(cfg);
  write_csv(dir / "train_balanced.csv", data.train, true);
  const auto tc = data.train.class_counts();
  out << "dataset: " << data.corpus.size() << " records (skipped " << data.corpus.skipped.total() << "), train "
      << data.split.train_indices.size() << " -> " << data.train.size() << " after balancing [" << tc[0] << ' '
      << tc[1] << ' ' << tc[2] << ' ' << tc[3] << "], test " << data.test.size() << '\n';

  const ModelConfig model = cfg.model();
  TrainConfig tcfg = cfg.trainer();
  tcfg.run_metadata = provenance_json(cfg);
  out << "model: " << count_params(init_params(model)).total << " parameters\n";
  const TrainResult result = train(data.train, data.test, model, tcfg, std::nullopt, [&](const EpochLog& e) {
    out << "epoch " << e.epoch << "  loss " << std::fixed << std::setprecision(4) << e.loss << "  train_acc "
        << e.train_acc << "  test_acc " << e.test_acc << "  lr " << std::setprecision(6) << e.lr << "  "
        << std::setprecision(1) << e.seconds << "s" << std::defaultfloat << std::endl;
  });
  if (cfg.epochs == 0) write_checkpoint(final_checkpoint_path(tcfg.checkpoint_dir.value()), model, result.params,
                                        tcfg.run_metadata);
  std::ofstream log(dir / "train_log.csv", std::ios::trunc);
  result.log.write_csv(log);
  out << "wrote " << (dir / "train_log.csv").string() << " and " << final_checkpoint_path(*tcfg.checkpoint_dir).string()
      << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string checkpoint;
  std::optional<std::string> dataset;
  std::string split = "test";  // test | train | all
  std::string out_dir = "runs/latest/eval";
  std::size_t threads = 1;
};

/// Rebuilds the data split recorded in the checkpoint and evaluates the
/// requested partition (training records exclude balancing additions).
inline MetricsReport evaluate_checkpoint(const EvaluateOptions& o) {
  const Checkpoint ck = read_checkpoint(o.checkpoint);
  nlohmann::json over = ck.run.is_object() ? ck.run : nlohmann::json::object();
  if (o.dataset) over["dataset"] = *o.dataset;
  RunConfig cfg = merge_config(RunConfig{}, over);
  if (cfg.input_dim != ck.config.input_dim) {
    throw Error(ErrorKind::IncompatibleCheckpoint, "run config input_dim differs from the checkpoint's model");
  }
  const Corpus corpus = load_dataset(cfg);
  Corpus part;
  if (o.split == "all") {
    part = corpus;
  } else if (o.split == "train" || o.split == "test") {
    const DatasetSplit s = split(corpus, cfg.split_ratio, cfg.split_seed, cfg.stratified);
    part = corpus.subset(o.split == "train" ? s.train_indices : s.test_indices);
  } else {
    throw Error(ErrorKind::BadConfig, "split must be test, train or all");
  }
  return evaluate_model(ck.params, ck.config, part, o.threads, o.split);
}

inline int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const MetricsReport r = evaluate_checkpoint(o);
  write_report_files(o.out_dir, r);
  out << format_report(r) << "wrote report to " << o.out_dir << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

inline std::string format_prob(double p) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << p;
  return s.str();
}

/// One line per url: `url,class_name,p0,p1,p2,p3`. Unusable urls produce
/// `url,error:<Kind>,,,,` and are counted in the return value.
inline std::size_t predict_lines(const Checkpoint& ck, const std::vector<std::string>& urls, std::ostream& out) {
  std::size_t failures = 0;
  for (const auto& url : urls) {
    out << csv_escape(url) << ',';
    try {
      const Prediction p = predict(url, ck.params, ck.config);
      out << kClassNames[static_cast<std::size_t>(p.label)];
      for (double v : p.probabilities) out << ',' << format_prob(v);
    } catch (const Error& e) {
      ++failures;
      out << "error:" << to_string(e.kind()) << ",,,,";
    }
    out << '\n';
  }
  return failures;
}

struct PredictOptions {
  std::string checkpoint;
  std::vector<std::string> urls;
  std::optional<std::string> input;  // one url per line
};

inline int cmd_predict(const PredictOptions& o, std::ostream& out, std::ostream& err) {
  const Checkpoint ck = read_checkpoint(o.checkpoint);
  std::vector<std::string> urls = o.urls;
  if (o.input) {
    std::ifstream in(*o.input);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open " + *o.input);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      urls.push_back(line);
    }
  }
  const std::size_t failures = predict_lines(ck, urls, out);
  if (failures) err << "warning: " << failures << " url(s) could not be classified\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

inline int cmd_report(const std::string& report_path, const std::optional<std::string>& out_dir, std::ostream& out) {
  const MetricsReport r = read_report(report_path);
  out << format_report(r);
  if (out_dir) {
    write_report_files(*out_dir, r);
    out << "wrote report files to " << *out_dir << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

inline int cmd_synth(std::size_t size, std::uint64_t seed, const std::string& output, std::ostream& out) {
  const Corpus c = generate_synthetic_corpus({.size = size, .seed = seed});
  write_csv(std::filesystem::path(output), c);
  const auto counts = c.class_counts();
  out << "wrote " << c.size() << " urls to " << output << " [" << counts[0] << ' ' << counts[1] << ' ' << counts[2]
      << ' ' << counts[3] << "]\n";
  return kExitOk;
}

}  // namespace urlgnn::cli
