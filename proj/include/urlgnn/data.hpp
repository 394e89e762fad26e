// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Corpus loading, label encoding, train/test splitting and train-side
// class balancing.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "urlgnn/encoder.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/model.hpp"
#include "urlgnn/rng.hpp"

namespace urlgnn {

enum class Provenance { Original, Augmented, Synthetic };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Original: return "original";
    case Provenance::Augmented: return "augmented";
    case Provenance::Synthetic: return "synthetic";
  }
  return "original";
}

inline std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "original") return Provenance::Original;
  if (s == "augmented") return Provenance::Augmented;
  if (s == "synthetic") return Provenance::Synthetic;
  return std::nullopt;
}

/// benign -> 0, defacement -> 1, malware -> 2, phishing -> 3, case-insensitive.
inline int encode_label(std::string_view type) {
  std::string lower(trim(type));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (lower == kClassNames[i]) return static_cast<int>(i);
  }
  throw Error(ErrorKind::UnknownLabel, "unknown label '" + std::string(type) + "'");
}

inline std::string_view label_name(int label) {
  if (label < 0 || label >= static_cast<int>(kNumClasses)) {
    throw Error(ErrorKind::BadTarget, "class id " + std::to_string(label));
  }
  return kClassNames[static_cast<std::size_t>(label)];
}

struct Record {
  std::string url;
  int label = 0;
  Provenance provenance = Provenance::Original;

  friend bool operator==(const Record&, const Record&) = default;
};

struct SkipCounts {
  std::size_t malformed = 0;      // wrong field count or broken quoting
  std::size_t unknown_label = 0;
  std::size_t empty_url = 0;

  std::size_t total() const noexcept { return malformed + unknown_label + empty_url; }
};

struct Corpus {
  std::vector<Record> records;
  SkipCounts skipped;

  std::size_t size() const noexcept { return records.size(); }

  std::array<std::size_t, kNumClasses> class_counts() const {
    std::array<std::size_t, kNumClasses> c{};
    for (const auto& r : records) ++c[static_cast<std::size_t>(r.label)];
    return c;
  }

  Corpus subset(const std::vector<std::size_t>& indices) const {
    Corpus out;
    out.records.reserve(indices.size());
    for (std::size_t i : indices) out.records.push_back(records.at(i));
    return out;
  }
};

// ---------------------------------------------------------------------------
// CSV

/// Splits CSV text into records of fields. Quoted fields may contain commas,
/// doubled quotes and newlines. Returns false from `next` at end of input;
/// `ok` is cleared for a record with an unterminated quote or stray quote.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields, bool& ok) {
    fields.clear();
    ok = true;
    int ch = in_.get();
    if (ch == EOF) return false;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    bool at_field_start = true;
    while (true) {
      if (ch == EOF) {
        if (quoted) ok = false;
        break;
      }
      const char c = static_cast<char>(ch);
      if (quoted) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
        at_field_start = true;
        ch = in_.get();
        continue;
      } else if (c == '\n') {
        break;
      } else if (c == '\r') {
        if (in_.peek() == '\n') in_.get();
        break;
      } else if (c == '"' && at_field_start) {
        quoted = true;
      } else {
        if (after_quote || c == '"') ok = false;
        field.push_back(c);
      }
      at_field_start = false;
      ch = in_.get();
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
};

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Reads `url,type` CSV (an optional third `provenance` column is accepted).
/// Bad rows are skipped and tallied by reason.
inline Corpus load_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  bool ok = true;
  if (!reader.next(fields, ok)) throw Error(ErrorKind::BadHeader, "missing header row");
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
  for (auto& f : fields) f = std::string(trim(f));
  const bool with_provenance = fields.size() == 3 && fields[2] == "provenance";
  if (fields.size() < 2 || fields[0] != "url" || fields[1] != "type" || (fields.size() == 3 && !with_provenance) ||
      fields.size() > 3) {
    throw Error(ErrorKind::BadHeader, "expected header 'url,type'");
  }
  const std::size_t width = with_provenance ? 3 : 2;
  Corpus corpus;
  while (reader.next(fields, ok)) {
    if (fields.size() == 1 && fields[0].empty() && ok) continue;  // blank line
    if (!ok || fields.size() != width) {
      ++corpus.skipped.malformed;
      continue;
    }
    Record r;
    const std::string_view url = trim(fields[0]);
    if (url.empty()) {
      ++corpus.skipped.empty_url;
      continue;
    }
    try {
      r.label = encode_label(fields[1]);
    } catch (const Error&) {
      ++corpus.skipped.unknown_label;
      continue;
    }
    if (with_provenance) {
      auto p = parse_provenance(trim(fields[2]));
      if (!p) {
        ++corpus.skipped.malformed;
        continue;
      }
      r.provenance = *p;
    }
    r.url = std::string(url);
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

inline Corpus load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open dataset " + path.string());
  return load_csv(static_cast<std::istream&>(in));
}

/// Writes `url,type` or, with provenance, `url,type,provenance`.
inline void write_csv(std::ostream& out, const Corpus& corpus, bool with_provenance = false) {
  out << (with_provenance ? "url,type,provenance\n" : "url,type\n");
  for (const auto& r : corpus.records) {
    out << csv_escape(r.url) << ',' << label_name(r.label);
    if (with_provenance) out << ',' << to_string(r.provenance);
    out << '\n';
  }
}

inline void write_csv(const std::filesystem::path& path, const Corpus& corpus, bool with_provenance = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + path.string());
  write_csv(out, corpus, with_provenance);
}

// ---------------------------------------------------------------------------
// Splitting

struct DatasetSplit {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
};

/// round(x) with halves rounded up.
inline std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

/// Largest-remainder apportionment of `total` across groups in proportion to
/// `counts`. Ties in the remainder go to the lower group index.
inline std::vector<std::size_t> apportion(const std::vector<std::size_t>& counts, std::size_t total) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  std::vector<std::size_t> out(counts.size(), 0);
  if (n == 0) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double exact = static_cast<double>(counts[i]) * static_cast<double>(total) / static_cast<double>(n);
    out[i] = std::min(counts[i], static_cast<std::size_t>(std::floor(exact)));
    assigned += out[i];
    remainders.emplace_back(exact - static_cast<double>(out[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total && k < remainders.size(); ++k) {
    const std::size_t i = remainders[k].second;
    if (out[i] < counts[i]) {
      ++out[i];
      ++assigned;
    }
  }
  return out;
}

/// Seeded shuffle then cut at round(ratio * N). Stratified mode cuts each
/// class separately with largest-remainder shares summing to round(ratio * N).
inline DatasetSplit split(const Corpus& corpus, double ratio = 0.8, std::uint64_t seed = 42,
                          bool stratified = false) {
  const std::size_t n = corpus.size();
  if (n < 2) throw Error(ErrorKind::TooFewSamples, "split needs at least 2 records, got " + std::to_string(n));
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::BadConfig, "split ratio must be in (0,1)");
  const std::size_t n_train = round_half_up(ratio * static_cast<double>(n));
  DatasetSplit s;
  s.seed = seed;
  Rng rng(seed);
  if (!stratified) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    rng.shuffle(idx);
    s.train_indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test_indices.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return s;
  }
  std::vector<std::vector<std::size_t>> by_class(kNumClasses);
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(corpus.records[i].label)].push_back(i);
  std::vector<std::size_t> counts;
  for (const auto& c : by_class) counts.push_back(c.size());
  const auto quota = apportion(counts, n_train);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    rng.shuffle(by_class[c]);
    s.train_indices.insert(s.train_indices.end(), by_class[c].begin(),
                           by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
    s.test_indices.insert(s.test_indices.end(), by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]),
                          by_class[c].end());
  }
  rng.shuffle(s.train_indices);
  rng.shuffle(s.test_indices);
  return s;
}

/// Stratified random subset of `n` records, in original corpus order.
inline Corpus stratified_subsample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n >= corpus.size()) return corpus;
  std::vector<std::vector<std::size_t>> by_class(kNumClasses);
  for (std::size_t i = 0; i < corpus.size(); ++i) by_class[static_cast<std::size_t>(corpus.records[i].label)].push_back(i);
  std::vector<std::size_t> counts;
  for (const auto& c : by_class) counts.push_back(c.size());
  const auto quota = apportion(counts, n);
  Rng rng(seed);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    rng.shuffle(by_class[c]);
    keep.insert(keep.end(), by_class[c].begin(), by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(keep.begin(), keep.end());
  return corpus.subset(keep);
}

// ---------------------------------------------------------------------------
// Balancing. Both operations return a copy of the input with new records
// appended; existing records are untouched.

/// Swaps adjacent characters 1-3 times; the character multiset is preserved.
inline std::string swap_adjacent(std::string_view url, Rng& rng) {
  std::vector<char32_t> cps = decode_utf8(url);
  const auto swaps = rng.uniform_int(1, 3);
  if (cps.size() >= 2) {
    for (std::int64_t k = 0; k < swaps; ++k) {
      const std::size_t p = rng.uniform_index(cps.size() - 1);
      std::swap(cps[p], cps[p + 1]);
    }
  }
  return encode_utf8(cps);
}

/// Adds round_half_up(fraction * count) perturbed copies of uniformly drawn
/// members of `label`.
inline Corpus augment_minority(const Corpus& corpus, int label, double fraction = 0.2, std::uint64_t seed = 42) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus.records[i].label == label) members.push_back(i);
  }
  if (members.empty()) throw Error(ErrorKind::EmptyClass, "no records of class " + std::string(label_name(label)));
  Corpus out = corpus;
  const std::size_t extra = round_half_up(fraction * static_cast<double>(members.size()));
  Rng rng(seed);
  for (std::size_t k = 0; k < extra; ++k) {
    const Record& src = corpus.records[rng.pick(members)];
    out.records.push_back({swap_adjacent(src.url, rng), label, Provenance::Augmented});
  }
  return out;
}

/// Prefix of `a` up to `cut` code points followed by the suffix of `b` from `cut`.
inline std::string crossover(std::string_view a, std::string_view b, std::size_t cut) {
  std::vector<char32_t> ca = decode_utf8(a);
  std::vector<char32_t> cb = decode_utf8(b);
  std::vector<char32_t> out(ca.begin(), ca.begin() + static_cast<std::ptrdiff_t>(std::min(cut, ca.size())));
  if (cut < cb.size()) out.insert(out.end(), cb.begin() + static_cast<std::ptrdiff_t>(cut), cb.end());
  return encode_utf8(out);
}

/// Default oversampling target: the largest count among non-majority classes.
inline std::size_t largest_minority_count(const Corpus& corpus) {
  auto counts = corpus.class_counts();
  std::vector<std::size_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted.size() > 1 ? sorted[1] : sorted[0];
}

/// SMOTE-style balancing in URL space: each synthetic record is a single-cut
/// crossover of two distinct same-class URLs, cut uniformly in
/// [1, min_len - 1]. Classes already at or above the target are unchanged.
inline Corpus oversample(const Corpus& corpus, const std::vector<int>& targets, std::uint64_t seed = 42,
                         std::optional<std::size_t> target_count = std::nullopt) {
  const std::size_t target = target_count.value_or(largest_minority_count(corpus));
  Corpus out = corpus;
  Rng rng(seed);
  for (int label : targets) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.records[i].label == label) members.push_back(i);
    }
    if (members.size() < 2) {
      throw Error(ErrorKind::TooFewSamples, "oversampling " + std::string(label_name(label)) + " needs 2 records, has " +
                                                std::to_string(members.size()));
    }
    for (std::size_t have = members.size(); have < target; ++have) {
      const std::size_t ia = rng.uniform_index(members.size());
      std::size_t ib = rng.uniform_index(members.size() - 1);
      if (ib >= ia) ++ib;
      const std::string& a = corpus.records[members[ia]].url;
      const std::string& b = corpus.records[members[ib]].url;
      const std::size_t min_len = std::min(decode_utf8(a).size(), decode_utf8(b).size());
      const std::size_t cut = min_len >= 2 ? 1 + rng.uniform_index(min_len - 1) : 1;
      out.records.push_back({crossover(a, b, cut), label, Provenance::Synthetic});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Per-epoch shuffled chunks; the last chunk may be short.
inline std::vector<std::vector<std::size_t>> batches(std::vector<std::size_t> indices, std::size_t batch_size,
                                                     std::uint64_t seed, std::uint64_t epoch) {
  if (batch_size == 0) throw Error(ErrorKind::BadConfig, "batch size must be positive");
  Rng rng{seed, epoch};
  rng.shuffle(indices);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < indices.size(); i += batch_size) {
    const std::size_t end = std::min(indices.size(), i + batch_size);
    out.emplace_back(indices.begin() + static_cast<std::ptrdiff_t>(i), indices.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace urlgnn
