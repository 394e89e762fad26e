// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// URL -> character graph.
//
// A URL of L characters (after canonicalisation) becomes L nodes connected
// to their immediate predecessor and successor in both directions, giving
// 2(L-1) directed edges. Node features are one-hot over a fixed 69-symbol
// charset, optionally widened with three graph-level features.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "urlgnn/error.hpp"
#include "urlgnn/tensor.hpp"

namespace urlgnn {

inline constexpr std::size_t kMaxUrlLength = 100;
inline constexpr std::size_t kCharsetSize = 69;
inline constexpr std::size_t kEngineeredFeatures = 3;
inline constexpr std::size_t kExtendedWidth = kCharsetSize + kEngineeredFeatures;
inline constexpr double kStandardPacketSize = 1500.0;

/// The published symbol order. Index = position in this string.
inline constexpr std::string_view kCharsetSymbols =
    "abcdefghijklmnopqrstuvwxyz"
    "0123456789"
    "-._~:/?#[]@!$&'()*+,;=%\"<>\\^`{|} ";

static_assert(kCharsetSymbols.size() == kCharsetSize);

class Charset {
 public:
  Charset() : symbols_(kCharsetSymbols) {
    index_.fill(-1);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      index_[static_cast<unsigned char>(symbols_[i])] = static_cast<int>(i);
    }
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  std::string_view symbols() const noexcept { return symbols_; }
  char symbol(std::size_t i) const { return symbols_.at(i); }

  /// Position of a code point, or nullopt when it is outside the charset.
  std::optional<std::size_t> index_of(char32_t cp) const {
    if (cp >= 128) return std::nullopt;
    int i = index_[cp];
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
  }

 private:
  std::string_view symbols_;
  std::array<int, 128> index_{};
};

inline const Charset& default_charset() {
  static const Charset cs;
  return cs;
}

// ---------------------------------------------------------------------------
// UTF-8 helpers. Malformed bytes decode to U+FFFD one byte at a time.

inline std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

/// Trims, lowercases ASCII letters and keeps the first 100 characters.
/// No padding is added.
inline std::string canonicalize(std::string_view url) {
  std::string_view t = trim(url);
  if (t.empty()) throw Error(ErrorKind::EmptyUrl, "url is empty after trimming");
  std::vector<char32_t> cps = decode_utf8(t);
  if (cps.size() > kMaxUrlLength) cps.resize(kMaxUrlLength);
  for (char32_t& cp : cps) {
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
  }
  return encode_utf8(cps);
}

// ---------------------------------------------------------------------------

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EngineeredFeatures {
  double packet_size_ratio = 0.0;
  double repetition = 0.0;
  double special_density = 0.0;

  friend bool operator==(const EngineeredFeatures&, const EngineeredFeatures&) = default;
};

struct UrlGraph {
  Tensor node_features;  // L x F, F in {69, 72}
  std::vector<Edge> edges;
  EngineeredFeatures graph_features;
  std::optional<int> label;
  std::size_t out_of_charset = 0;

  std::size_t num_nodes() const noexcept { return node_features.rows(); }
  std::size_t feature_width() const noexcept { return node_features.cols(); }
};

inline bool is_ascii_alnum(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
}

/// ratio = L / 1500 clamped to [0,1]; repetition = 1 - distinct/L;
/// special_density = non-alphanumeric / L. Lengths count code points.
inline EngineeredFeatures engineered_features(std::string_view url) {
  const std::vector<char32_t> cps = decode_utf8(url);
  if (cps.empty()) throw Error(ErrorKind::EmptyUrl, "engineered_features on an empty url");
  const double len = static_cast<double>(cps.size());
  std::set<char32_t> distinct(cps.begin(), cps.end());
  const auto special = std::count_if(cps.begin(), cps.end(), [](char32_t c) { return !is_ascii_alnum(c); });
  EngineeredFeatures f;
  f.packet_size_ratio = std::clamp(len / kStandardPacketSize, 0.0, 1.0);
  f.repetition = std::clamp(1.0 - static_cast<double>(distinct.size()) / len, 0.0, 1.0);
  f.special_density = std::clamp(static_cast<double>(special) / len, 0.0, 1.0);
  return f;
}

/// Bidirectional path edges over L nodes: (i,i+1) then (i+1,i) for each i.
inline std::vector<Edge> sequential_edges(std::size_t num_nodes) {
  std::vector<Edge> edges;
  if (num_nodes < 2) return edges;
  edges.reserve(2 * (num_nodes - 1));
  for (std::uint32_t i = 0; i + 1 < num_nodes; ++i) {
    edges.push_back({i, i + 1});
    edges.push_back({i + 1, i});
  }
  return edges;
}

/// Builds the graph of a canonical URL. The input is canonicalised again,
/// which is a no-op on canonical text.
inline UrlGraph encode_url(std::string_view url, const Charset& charset = default_charset(), bool extended = false) {
  const std::string canon = canonicalize(url);
  const std::vector<char32_t> cps = decode_utf8(canon);
  const std::size_t n = cps.size();
  UrlGraph g;
  g.graph_features = engineered_features(canon);
  g.node_features = Tensor(n, extended ? kExtendedWidth : kCharsetSize);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto idx = charset.index_of(cps[i])) {
      g.node_features(i, *idx) = 1.0;
    } else {
      ++g.out_of_charset;
    }
    if (extended) {
      g.node_features(i, kCharsetSize + 0) = g.graph_features.packet_size_ratio;
      g.node_features(i, kCharsetSize + 1) = g.graph_features.repetition;
      g.node_features(i, kCharsetSize + 2) = g.graph_features.special_density;
    }
  }
  g.edges = sequential_edges(n);
  return g;
}

/// Argmax of each one-hot row, skipping all-zero rows.
inline std::string decode_graph(const UrlGraph& g, const Charset& charset = default_charset()) {
  std::string out;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    auto row = g.node_features.row(i).first(charset.size());
    auto it = std::max_element(row.begin(), row.end());
    if (*it > 0.0) out.push_back(charset.symbol(static_cast<std::size_t>(it - row.begin())));
  }
  return out;
}

}  // namespace urlgnn
