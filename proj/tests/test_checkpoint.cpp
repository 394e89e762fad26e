// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>

#include "urlgnn/checkpoint.hpp"

using namespace urlgnn;

TEST(Checkpoint, RoundTripIsBitExact) {
  ModelConfig cfg;
  cfg.readout = Readout::Mean;
  ModelParams p = init_params(cfg);
  p.fc_bias[1] = -0.0;
  p.fc_bias[2] = 1e-310;  // subnormal
  const nlohmann::json run = {{"dataset", "synthetic"}, {"seed", 42}};
  const std::string bytes = serialize_checkpoint(cfg, p, run);
  const Checkpoint ck = deserialize_checkpoint(bytes);
  EXPECT_EQ(ck.params, p);
  EXPECT_TRUE(std::signbit(ck.params.fc_bias[1]));
  EXPECT_EQ(ck.config.readout, Readout::Mean);
  EXPECT_EQ(ck.run, run);
  EXPECT_EQ(serialize_checkpoint(ck.config, ck.params, ck.run), bytes);
}

TEST(Checkpoint, FileRoundTrip) {
  const ModelConfig cfg;
  const ModelParams p = init_params(cfg);
  const auto path = std::filesystem::temp_directory_path() / "urlgnn_ckpt_test" / "m.ckpt";
  write_checkpoint(path, cfg, p);
  EXPECT_EQ(read_checkpoint(path).params, p);
  std::filesystem::remove_all(path.parent_path());
}

TEST(Checkpoint, RejectsCorruptOrMismatchedInput) {
  const ModelConfig cfg;
  const std::string bytes = serialize_checkpoint(cfg, init_params(cfg));
  auto kind_of = [](const std::string& b) {
    try {
      deserialize_checkpoint(b);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::BadConfig;
  };
  EXPECT_EQ(kind_of(bytes.substr(0, bytes.size() - 3)), ErrorKind::IncompatibleCheckpoint);
  EXPECT_EQ(kind_of("NOTACKPT" + bytes.substr(8)), ErrorKind::IncompatibleCheckpoint);
  EXPECT_EQ(kind_of(bytes + "x"), ErrorKind::IncompatibleCheckpoint);

  // Header claims 72-wide input but the tensors are 69-wide.
  std::string tampered = serialize_checkpoint(cfg, init_params(cfg));
  const std::string from = "\"input_dim\":69", to = "\"input_dim\":72";
  tampered.replace(tampered.find(from), from.size(), to);
  EXPECT_EQ(kind_of(tampered), ErrorKind::IncompatibleCheckpoint);
}

TEST(Checkpoint, MissingFile) {
  try {
    read_checkpoint("/no/such/model.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FileNotFound);
  }
}
