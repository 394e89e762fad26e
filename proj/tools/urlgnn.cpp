// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: encode, train, evaluate, predict, report, synth.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "urlgnn/cli.hpp"

namespace {

void add_common(CLI::App* app, urlgnn::cli::CommonOptions& o) {
  app->add_option("--config", o.config, "JSON run config");
  app->add_option("--seed", o.seed, "model/shuffle seed");
  app->add_option("--out-dir", o.out_dir, "output directory");
  app->add_option("--threads", o.threads, "worker threads");
  app->add_option("--input-dim", o.input_dim, "node feature width (69 or 72)");
  app->add_option("--readout", o.readout, "lstm | mean");
  app->add_option("--aggregation", o.aggregation, "sym_norm | mean");
  app->add_option("--set", o.set, "key=value config override (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = urlgnn::cli;
  CLI::App app{"urlgnn: character-graph URL classifier"};
  app.require_subcommand(1);

  cli::CommonOptions common;

  cli::EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "encode a CSV corpus into graphs and summarize");
  encode->add_option("input", enc.input, "CSV with url,type columns")->required();
  encode->add_option("-o,--output", enc.output, "summary JSON path")->required();
  encode->add_option("--dump", enc.dump, "write the first N graphs as JSON lines");
  encode->add_option("--input-dim", enc.input_dim, "node feature width (69 or 72)");

  std::string dataset;
  std::optional<std::size_t> epochs;
  auto* train = app.add_subcommand("train", "train a model and write checkpoints");
  add_common(train, common);
  train->add_option("--dataset", dataset, "CSV path or 'synthetic'");
  train->add_option("--epochs", epochs, "epoch count");

  cli::EvaluateOptions ev;
  std::optional<std::string> ev_dataset;
  auto* evaluate = app.add_subcommand("evaluate", "score a checkpoint on a data split");
  evaluate->add_option("checkpoint", ev.checkpoint, "checkpoint file")->required();
  evaluate->add_option("--dataset", ev_dataset, "override the dataset recorded in the checkpoint");
  evaluate->add_option("--split", ev.split, "test | train | all")->check(CLI::IsMember({"test", "train", "all"}));
  evaluate->add_option("--out-dir", ev.out_dir, "report directory");
  evaluate->add_option("--threads", ev.threads, "worker threads");

  cli::PredictOptions pr;
  auto* predict = app.add_subcommand("predict", "classify urls");
  predict->add_option("checkpoint", pr.checkpoint, "checkpoint file")->required();
  predict->add_option("urls", pr.urls, "urls to classify");
  predict->add_option("-i,--input", pr.input, "file with one url per line");

  std::string report_path;
  std::optional<std::string> report_out;
  auto* report = app.add_subcommand("report", "print a saved report and regenerate its tables");
  report->add_option("report", report_path, "report.json")->required();
  report->add_option("--out-dir", report_out, "rewrite CSV tables here");

  std::size_t synth_size = 12000;
  std::uint64_t synth_seed = 42;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a synthetic labelled corpus");
  synth->add_option("-o,--output", synth_out, "CSV path")->required();
  synth->add_option("--size", synth_size, "record count");
  synth->add_option("--seed", synth_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  return cli::run_guarded(
      [&]() -> int {
        if (*encode) return cli::cmd_encode(enc, std::cout);
        if (*train) {
          nlohmann::json extra = nlohmann::json::object();
          if (!dataset.empty()) extra["dataset"] = dataset;
          if (epochs) extra["epochs"] = *epochs;
          return cli::cmd_train(cli::resolve_config(common, extra), std::cout);
        }
        if (*evaluate) {
          ev.dataset = ev_dataset;
          return cli::cmd_evaluate(ev, std::cout);
        }
        if (*predict) return cli::cmd_predict(pr, std::cout, std::cerr);
        if (*report) return cli::cmd_report(report_path, report_out, std::cout);
        return cli::cmd_synth(synth_size, synth_seed, synth_out, std::cout);
      },
      std::cerr);
}
