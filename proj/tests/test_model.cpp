// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "properties.hpp"

using namespace urlgnn;

TEST(Model, DefaultParameterCount) {
  const ParamCount pc = count_params(init_params(ModelConfig{}));
  std::map<std::string, std::size_t> by_stage(pc.components.begin(), pc.components.end());
  EXPECT_EQ(by_stage["gnn1"], 69u * 69u + 69u);
  EXPECT_EQ(by_stage["gnn2"], 69u * 69u + 69u);
  EXPECT_EQ(by_stage["gat1"], 4u * (69u * 64u + 128u));
  EXPECT_EQ(by_stage["gat2"], 256u * 64u + 128u);
  EXPECT_EQ(by_stage["lstm"], 2u * (64u * 256u + 64u * 256u + 256u));
  EXPECT_EQ(by_stage["fc"], 64u * 4u + 4u);
  EXPECT_EQ(pc.total, 110656u);
}

TEST(Model, ExtendedInputWidth) {
  ModelConfig cfg;
  cfg.input_dim = 72;
  const ModelParams p = init_params(cfg);
  EXPECT_EQ(p.gnn1.weight.rows(), 72u);
  EXPECT_EQ(p.gat1.weight[0].rows(), 72u);
  const Prediction pr = predict("example.com/a", p, cfg);
  double s = 0.0;
  for (double v : pr.probabilities) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Model, InitIsDeterministicInSeed) {
  ModelConfig a, b;
  b.seed = 43;
  EXPECT_EQ(init_params(a), init_params(a));
  EXPECT_FALSE(init_params(a) == init_params(b));
}

TEST(Model, BadConfigRejected) {
  ModelConfig cfg;
  cfg.input_dim = 70;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_THROW(parse_readout("max"), Error);
  EXPECT_THROW(parse_aggregation("sum"), Error);
}

TEST(Model, ConfigJsonRoundTrip) {
  ModelConfig cfg;
  cfg.readout = Readout::Mean;
  cfg.aggregation = AggregationMode::Mean;
  cfg.input_dim = 72;
  nlohmann::json j = cfg;
  EXPECT_EQ(j.get<ModelConfig>().readout, Readout::Mean);
  EXPECT_EQ(j.get<ModelConfig>().input_dim, 72u);
}

TEST(Model, ForwardProducesLogProbabilities) {
  const ModelConfig cfg;
  const ModelParams p = init_params(cfg);
  for (const char* url : {"a", "http://x.y", "paypal.com.login.verify.secure-update.ru/index.php?id=1"}) {
    const Tensor lp = forward(encode_url(url), p, cfg);
    ASSERT_EQ(lp.cols(), kNumClasses);
    double s = 0.0;
    for (double v : lp.span()) {
      EXPECT_LE(v, 0.0);
      s += std::exp(v);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Model, WidthMismatchAndEmptyGraphRejected) {
  const ModelConfig cfg;
  const ModelParams p = init_params(cfg);
  try {
    forward(encode_url("abc", default_charset(), true), p, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
  UrlGraph empty;
  empty.node_features = Tensor(0, kCharsetSize);
  try {
    forward(empty, p, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyGraph);
  }
}

TEST(Model, PredictRejectsEmptyUrl) {
  const ModelConfig cfg;
  const ModelParams p = init_params(cfg);
  try {
    predict("   ", p, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyUrl);
  }
}

TEST(Model, ArgmaxTiesGoToLowestIndex) {
  const std::vector<double> v = {0.25, 0.25, 0.25, 0.25};
  EXPECT_EQ(argmax(v), 0);
  const std::vector<double> w = {0.1, 0.4, 0.4, 0.1};
  EXPECT_EQ(argmax(w), 1);
}

TEST(Model, MeanReadoutIsPermutationInvariant) {
  const auto r = props::permutation_invariance({"abcdef.gh/ij", "x-y_z.com"}, 10, 3);
  EXPECT_TRUE(r.labels_identical);
  EXPECT_LT(r.max_prob_diff, 1e-9);
}

TEST(Model, LstmReadoutDependsOnOrder) {
  // A reversed path graph with relabelled nodes is isomorphic, but the LSTM
  // reads nodes in index order, so its output changes.
  ModelConfig cfg;
  const ModelParams p = init_params(cfg);
  const UrlGraph g = encode_url("abcdefgh");
  std::vector<std::size_t> rev(g.num_nodes());
  for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = rev.size() - 1 - i;
  const Prediction a = predict(g, p, cfg), b = predict(oracle::permute_graph(g, rev), p, cfg);
  double d = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) d = std::max(d, std::abs(a.probabilities[c] - b.probabilities[c]));
  EXPECT_GT(d, 1e-9);
}

TEST(Model, EndToEndGradientOnResolvedCoordinates) {
  const auto run = props::full_model_grad_check(5, 15);
  EXPECT_LT(run.result.max_rel_error_resolved, 1e-4);
  EXPECT_GT(run.result.coords_checked, 300u);
}

TEST(Model, AccumulatedGradsMatchTape) {
  const ModelConfig cfg;
  const ModelParams p = init_params(cfg);
  ModelParams g = p.zeros_like();
  Tape tape;
  ModelVars v = bind(tape, p);
  tape.backward(nll_loss(forward(tape, v, encode_url("abc.de"), cfg), 2));
  accumulate_grads(tape, v, g);
  accumulate_grads(tape, v, g);
  EXPECT_DOUBLE_EQ(g.fc_bias[2], 2.0 * tape.grad(v.fc_bias)[2]);
}
