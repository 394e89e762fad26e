// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "urlgnn/cli.hpp"

using namespace urlgnn;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = fs::path(URLGNN_TEST_DATA) / "fixture_300.csv";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("urlgnn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig fixture_config(const fs::path& out) const {
    cli::CommonOptions o;
    o.out_dir = out.string();
    o.set = {"epochs=1", "split_seed=3"};
    return cli::resolve_config(o, {{"dataset", kFixture.string()}});
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ResolveConfigLayering) {
  const fs::path file = dir_ / "cfg.json";
  std::ofstream(file) << R"({"epochs": 4, "readout": "mean", "lr": 0.01})";
  cli::CommonOptions o;
  o.config = file.string();
  o.readout = "lstm";
  o.set = {"batch_size=8", "dataset=x.csv"};
  const RunConfig c = cli::resolve_config(o);
  EXPECT_EQ(c.epochs, 4u);
  EXPECT_EQ(c.lr, 0.01);
  EXPECT_EQ(c.readout, "lstm");
  EXPECT_EQ(c.batch_size, 8u);
  EXPECT_EQ(c.dataset, "x.csv");
  o.set = {"bogus=1"};
  EXPECT_THROW(cli::resolve_config(o), Error);
}

TEST_F(CliTest, EncodeSummarizesFixture) {
  cli::EncodeOptions o;
  o.input = kFixture.string();
  o.output = (dir_ / "summary.json").string();
  o.dump = 3;
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_encode(o, out), 0);
  const auto j = nlohmann::json::parse(slurp(o.output));
  EXPECT_EQ(j["count"], 294);
  EXPECT_EQ(j["skipped"]["malformed"], 2);
  EXPECT_EQ(j["class_counts"]["malware"], 16);
  std::size_t hist = 0;
  for (auto& [k, v] : j["length_histogram"].items()) hist += v.get<std::size_t>();
  EXPECT_EQ(hist, 294u);
  std::ifstream dump(o.output + ".graphs.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(dump, line)) {
    const auto g = nlohmann::json::parse(line);
    EXPECT_EQ(g["edges"].size(), 2 * (g["nodes"].size() - 1));
    ++lines;
  }
  EXPECT_EQ(lines, 3u);
}

TEST_F(CliTest, TrainEvaluatePredictReport) {
  const fs::path run = dir_ / "run";
  std::ostringstream log;
  ASSERT_EQ(cli::cmd_train(fixture_config(run), log), 0);
  for (const char* f : {"config.json", "train_log.csv", "train_balanced.csv", "checkpoints/model.ckpt",
                        "checkpoints/epoch_001.ckpt"}) {
    EXPECT_TRUE(fs::exists(run / f)) << f;
  }
  const Corpus balanced = load_csv(run / "train_balanced.csv");
  EXPECT_GT(balanced.size(), 235u);

  // The checkpoint remembers the split, so evaluation sizes are known.
  cli::EvaluateOptions ev;
  ev.checkpoint = (run / "checkpoints/model.ckpt").string();
  ev.out_dir = (dir_ / "eval").string();
  std::ostringstream out;
  ASSERT_EQ(cli::cmd_evaluate(ev, out), 0);
  const MetricsReport test = read_report(dir_ / "eval/report.json");
  EXPECT_EQ(test.total, 294u - 235u);
  EXPECT_EQ(test.split, "test");
  ev.split = "train";
  EXPECT_EQ(cli::evaluate_checkpoint(ev).total, 235u);
  ev.split = "all";
  EXPECT_EQ(cli::evaluate_checkpoint(ev).total, 294u);

  std::ostringstream pred;
  const Checkpoint ck = read_checkpoint(ev.checkpoint);
  EXPECT_EQ(cli::predict_lines(ck, {"http://Example.com/a", "  ", "x,y"}, pred), 1u);
  std::istringstream lines(pred.str());
  std::string l1, l2, l3;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  EXPECT_EQ(std::count(l1.begin(), l1.end(), ','), 5);
  EXPECT_EQ(l2, "  ,error:EmptyUrl,,,,");
  EXPECT_TRUE(l3.starts_with("\"x,y\","));

  std::ostringstream rep;
  ASSERT_EQ(cli::cmd_report((dir_ / "eval/report.json").string(), (dir_ / "again").string(), rep), 0);
  EXPECT_EQ(slurp(dir_ / "again/roc.csv"), slurp(dir_ / "eval/roc.csv"));
  EXPECT_TRUE(rep.str().starts_with("split=test"));
}

TEST_F(CliTest, CheckpointsIndependentOfOutputDirectory) {
  std::ostringstream log;
  ASSERT_EQ(cli::cmd_train(fixture_config(dir_ / "a"), log), 0);
  ASSERT_EQ(cli::cmd_train(fixture_config(dir_ / "b"), log), 0);
  EXPECT_EQ(slurp(dir_ / "a/checkpoints/model.ckpt"), slurp(dir_ / "b/checkpoints/model.ckpt"));
}

TEST_F(CliTest, MissingDatasetFailsWithPath) {
  cli::CommonOptions o;
  o.out_dir = (dir_ / "x").string();
  const RunConfig cfg = cli::resolve_config(o, {{"dataset", "/no/such/data.csv"}});
  std::ostringstream out, err;
  EXPECT_NE(cli::run_guarded([&] { return cli::cmd_train(cfg, out); }, err), 0);
  EXPECT_NE(err.str().find("/no/such/data.csv"), std::string::npos);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string exe = URLGNN_CLI;
  const std::string quiet = " >/dev/null 2>&1";
  EXPECT_EQ(std::system((exe + " synth --size 50 -o " + (dir_ / "s.csv").string() + quiet).c_str()), 0);
  EXPECT_NE(std::system((exe + " train --dataset /no/such/file.csv --out-dir " + (dir_ / "r").string() + quiet).c_str()),
            0);
  EXPECT_NE(std::system((exe + " evaluate /no/such.ckpt" + quiet).c_str()), 0);
  EXPECT_NE(std::system((exe + " frobnicate" + quiet).c_str()), 0);
}
