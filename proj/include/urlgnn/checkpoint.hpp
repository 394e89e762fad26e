// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Binary checkpoint container.
//
//   bytes 0-7   magic "URLGNNCK"
//   u32         format version (kCheckpointVersion)
//   u64 + bytes JSON metadata: {"model": ModelConfig, "run": {...}}
//   u64         tensor count
//   per tensor: u32 name length, name bytes, u64 rows, u64 cols,
//               rows*cols IEEE-754 doubles, row-major
//
// All integers and doubles are little-endian. Reading back yields bitwise
// identical tensors.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include "json.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/model.hpp"

namespace urlgnn {

inline constexpr char kCheckpointMagic[8] = {'U', 'R', 'L', 'G', 'N', 'N', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  nlohmann::json run;  // free-form provenance, e.g. the resolved run config
};

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
}

class ByteReader {
 public:
  explicit ByteReader(std::string data) : data_(std::move(data)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) throw Error(ErrorKind::IncompatibleCheckpoint, "checkpoint is truncated");
  }
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize_checkpoint(const ModelConfig& config, const ModelParams& params,
                                        const nlohmann::json& run = nlohmann::json::object()) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  detail::put_le<std::uint32_t>(out, kCheckpointVersion);
  const std::string meta = nlohmann::json{{"model", config}, {"run", run}}.dump();
  detail::put_le<std::uint64_t>(out, meta.size());
  out += meta;
  const auto tensors = params.tensors();
  const auto names = params.names();
  detail::put_le<std::uint64_t>(out, tensors.size());
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(names[i].size()));
    out += names[i];
    detail::put_le<std::uint64_t>(out, tensors[i]->rows());
    detail::put_le<std::uint64_t>(out, tensors[i]->cols());
    for (double v : tensors[i]->span()) detail::put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

/// Parses a checkpoint and checks every tensor name and shape against the
/// architecture its stored config describes.
inline Checkpoint deserialize_checkpoint(std::string bytes) {
  detail::ByteReader in(std::move(bytes));
  if (in.bytes(sizeof(kCheckpointMagic)) != std::string(kCheckpointMagic, sizeof(kCheckpointMagic))) {
    throw Error(ErrorKind::IncompatibleCheckpoint, "bad magic");
  }
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::IncompatibleCheckpoint, "unsupported version " + std::to_string(version));
  }
  Checkpoint ck;
  try {
    const auto meta = nlohmann::json::parse(in.bytes(in.get<std::uint64_t>()));
    ck.config = meta.at("model").get<ModelConfig>();
    ck.run = meta.value("run", nlohmann::json::object());
    ck.config.validate();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::IncompatibleCheckpoint, std::string("bad metadata: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::IncompatibleCheckpoint, e.what());
  }
  ck.params = init_params(ck.config);
  auto tensors = ck.params.tensors();
  const auto names = ck.params.names();
  const auto count = in.get<std::uint64_t>();
  if (count != tensors.size()) {
    throw Error(ErrorKind::IncompatibleCheckpoint,
                "expected " + std::to_string(tensors.size()) + " tensors, found " + std::to_string(count));
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const std::string name = in.bytes(in.get<std::uint32_t>());
    const auto rows = in.get<std::uint64_t>();
    const auto cols = in.get<std::uint64_t>();
    if (name != names[i] || rows != tensors[i]->rows() || cols != tensors[i]->cols()) {
      throw Error(ErrorKind::IncompatibleCheckpoint, "tensor " + name + " [" + std::to_string(rows) + "x" +
                                                         std::to_string(cols) + "] does not match " + names[i] +
                                                         " " + tensors[i]->shape_string());
    }
    for (double& v : tensors[i]->span()) v = std::bit_cast<double>(in.get<std::uint64_t>());
  }
  if (!in.at_end()) throw Error(ErrorKind::IncompatibleCheckpoint, "trailing bytes after last tensor");
  return ck;
}

inline void write_checkpoint(const std::filesystem::path& path, const ModelConfig& config, const ModelParams& params,
                             const nlohmann::json& run = nlohmann::json::object()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write checkpoint " + path.string());
  const std::string bytes = serialize_checkpoint(config, params, run);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str());
}

}  // namespace urlgnn
