// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "properties.hpp"

using namespace urlgnn;

TEST(Neighborhoods, AddsSelfLoopsAndGroupsByTarget) {
  const auto nb = Neighborhoods::build(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  EXPECT_EQ(nb.offsets, (std::vector<std::size_t>{0, 2, 5, 7}));
  EXPECT_EQ(nb.sources, (std::vector<std::size_t>{1, 0, 0, 2, 1, 1, 2}));
  EXPECT_EQ(nb.degree(1), 3u);
}

TEST(Neighborhoods, ExplicitSelfLoopNotDuplicated) {
  const auto nb = Neighborhoods::build(2, {{0, 0}, {1, 0}});
  EXPECT_EQ(nb.degree(0), 2u);
  EXPECT_EQ(nb.degree(1), 1u);
}

TEST(Neighborhoods, OutOfRangeEdgeThrows) {
  try {
    Neighborhoods::build(2, {{0, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
}

TEST(Neighborhoods, SingleNodeHasOnlyItself) {
  const auto nb = Neighborhoods::build(1, {});
  EXPECT_EQ(nb.sources, (std::vector<std::size_t>{0}));
}

TEST(Aggregation, PathGraphSymmetricCoefficients) {
  // Path 0-1-2 with self-loops: degrees 2, 3, 2.
  const auto nb = Neighborhoods::build(3, sequential_edges(3));
  const auto c = aggregation_coefficients(nb, AggregationMode::SymNorm);
  // Node 0 lists {1, 0}.
  EXPECT_DOUBLE_EQ(c[0], 1.0 / std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(c[1], 0.5);
  const auto m = aggregation_coefficients(nb, AggregationMode::Mean);
  for (std::size_t k = 2; k < 5; ++k) EXPECT_DOUBLE_EQ(m[k], 1.0 / 3.0);
}

TEST(Gnn, MatchesDenseOracle) { EXPECT_LT(props::gnn_vs_dense(60, 11), 1e-10); }

TEST(Gnn, InputWidthMismatchThrows) {
  Tape tape(false);
  Rng rng(1);
  GnnLayerParams p = GnnLayerParams::init(4, 3, rng);
  EXPECT_THROW(gnn_forward(tape.constant(Tensor(2, 5)), Neighborhoods::build(2, {}), bind(tape, p)), Error);
}

TEST(Gat, MatchesDenseOracle) { EXPECT_LT(props::gat_vs_dense(60, 12), 1e-10); }

TEST(Gat, AttentionRowsSumToOne) { EXPECT_LT(props::attention_row_sums(100, 13), 1e-9); }

TEST(Gat, AttentionWeightsMatchDenseSoftmax) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    auto [n, edges] = oracle::random_graph(6, rng);
    const Tensor x = oracle::random_tensor(n, 3, rng);
    GatLayerParams p = GatLayerParams::init(3, 4, 1, true, rng);
    const auto nb = Neighborhoods::build(n, edges);
    Tape tape(false);
    std::vector<AttentionWeights> alpha;
    gat_forward(tape.constant(x), nb, bind(tape, p), &alpha);
    std::vector<double> a(p.attention[0].span().begin(), p.attention[0].span().end());
    const auto dense = oracle::gat_head(oracle::to_matrix(x), oracle::adjacency(n, edges), oracle::to_matrix(p.weight[0]),
                                        a, kLeakySlope);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = nb.offsets[i]; k < nb.offsets[i + 1]; ++k)
        EXPECT_NEAR(alpha[0][k], dense.alpha[i][nb.sources[k]], 1e-12);
  }
}

TEST(Gat, ConcatAndAverageWidths) {
  Rng rng(15);
  EXPECT_EQ(GatLayerParams::init(5, 3, 4, true, rng).output_width(), 12u);
  EXPECT_EQ(GatLayerParams::init(5, 3, 4, false, rng).output_width(), 3u);
}

TEST(Gat, WrongAttentionShapeThrows) {
  Rng rng(16);
  GatLayerParams p = GatLayerParams::init(3, 2, 1, true, rng);
  p.attention[0] = Tensor(3, 1);
  Tape tape(false);
  EXPECT_THROW(gat_forward(tape.constant(Tensor(2, 3)), Neighborhoods::build(2, {}), bind(tape, p)), Error);
}

TEST(Lstm, MatchesManualUnrolling) { EXPECT_LT(props::lstm_vs_unrolled(100, 17), 1e-12); }

TEST(Lstm, ZeroWeightClosedForm) { EXPECT_LE(props::lstm_zero_weight_closed_form(18), 1e-12); }

TEST(Lstm, GateInitBoundsArePerBlock) {
  Rng rng(19);
  const auto p = LstmLayerParams::init(64, 64, rng);
  const double bound = std::sqrt(6.0 / 128.0);
  double mx = 0.0;
  for (double v : p.input_weight.span()) mx = std::max(mx, std::abs(v));
  EXPECT_LE(mx, bound);
  EXPECT_GT(mx, 0.9 * bound);
  EXPECT_EQ(p.input_weight.cols(), 256u);
  for (double v : p.bias.span()) EXPECT_EQ(v, 0.0);
}

// Finite differences through each layer. Random inputs keep pre-activations
// away from the ReLU kink with overwhelming probability.

TEST(LayerGradients, Gnn) {
  Rng rng(20);
  for (AggregationMode mode : {AggregationMode::SymNorm, AggregationMode::Mean}) {
    const auto nb = Neighborhoods::build(4, {{0, 1}, {1, 2}, {3, 1}, {2, 0}});
    std::vector<Tensor> t = {oracle::random_tensor(4, 3, rng), oracle::random_tensor(3, 5, rng),
                             oracle::random_tensor(1, 5, rng)};
    std::vector<Tensor*> ptrs = {&t[0], &t[1], &t[2]};
    auto f = [&](Tape&, std::span<const Var> v) { return sum(tanh(gnn_forward(v[0], nb, {v[1], v[2]}, mode))); };
    EXPECT_LT(grad_check(f, ptrs).max_rel_error, 1e-6);
  }
}

TEST(LayerGradients, AttentionAggregate) {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    auto [n, edges] = oracle::random_graph(6, rng);
    const auto nb = Neighborhoods::build(n, edges);
    std::vector<Tensor> t = {oracle::random_tensor(n, 3, rng), oracle::random_tensor(6, 1, rng, 2.0)};
    std::vector<Tensor*> ptrs = {&t[0], &t[1]};
    auto f = [&](Tape&, std::span<const Var> v) { return sum(tanh(attention_aggregate(v[0], v[1], nb))); };
    EXPECT_LT(grad_check(f, ptrs).max_rel_error, 1e-6);
  }
}

TEST(LayerGradients, Lstm) {
  Rng rng(22);
  LstmParams p = LstmParams::init(3, 4, 2, rng);
  for (auto& l : p.layers) l.bias = oracle::random_tensor(1, 16, rng);
  std::vector<Tensor> t = {oracle::random_tensor(5, 3, rng)};
  std::vector<Tensor*> ptrs = {&t[0]};
  for (auto& l : p.layers) {
    ptrs.push_back(&l.input_weight);
    ptrs.push_back(&l.recurrent_weight);
    ptrs.push_back(&l.bias);
  }
  auto f = [&](Tape&, std::span<const Var> v) {
    LstmVars lv;
    for (std::size_t l = 0; l < 2; ++l) lv.layers.push_back({v[1 + 3 * l], v[2 + 3 * l], v[3 + 3 * l]});
    return sum(lstm_sequence(v[0], lv));
  };
  EXPECT_LT(grad_check(f, ptrs).max_rel_error, 1e-6);
}
