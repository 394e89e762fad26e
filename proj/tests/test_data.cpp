// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "urlgnn/config.hpp"
#include "urlgnn/data.hpp"
#include "urlgnn/synthetic.hpp"

using namespace urlgnn;

namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return load_csv(in);
}

Corpus tiny_corpus() {
  return parse(
      "url,type\n"
      "a.com,benign\nb.com,benign\nc.com,benign\nd.com,benign\ne.com,benign\nf.com,benign\n"
      "g.org/x,defacement\nh.org/y,defacement\n"
      "i.ru/m.exe,malware\nj.ru/n.exe,malware\n"
      "k.tk/login,phishing\nl.tk/verify,phishing\n");
}

}  // namespace

TEST(Labels, EncodingIsFixedAndCaseInsensitive) {
  EXPECT_EQ(encode_label("benign"), 0);
  EXPECT_EQ(encode_label("Defacement"), 1);
  EXPECT_EQ(encode_label("MALWARE"), 2);
  EXPECT_EQ(encode_label(" phishing "), 3);
  try {
    encode_label("spam");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownLabel);
  }
}

TEST(Csv, FixtureCounts) {
  const Corpus c = load_csv(std::filesystem::path(URLGNN_TEST_DATA) / "fixture_300.csv");
  EXPECT_EQ(c.size(), 294u);
  EXPECT_EQ(c.class_counts(), (std::array<std::size_t, 4>{193, 43, 16, 42}));
  EXPECT_EQ(c.skipped.empty_url, 2u);
  EXPECT_EQ(c.skipped.unknown_label, 2u);
  EXPECT_EQ(c.skipped.malformed, 2u);
  EXPECT_EQ(c.size() + c.skipped.total(), 300u);
}

TEST(Csv, QuotingAndLineEndings) {
  const Corpus c = parse("\xEF\xBB\xBFurl,type\r\n\"a.com/?q=1,2\",benign\r\n\"say \"\"hi\"\"\",malware\n\"multi\nline\",phishing\n\n");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.records[0].url, "a.com/?q=1,2");
  EXPECT_EQ(c.records[1].url, "say \"hi\"");
  EXPECT_EQ(c.records[2].url, "multi\nline");
}

TEST(Csv, HeaderErrors) {
  EXPECT_THROW(parse(""), Error);
  try {
    parse("link,label\na,benign\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadHeader);
  }
}

TEST(Csv, MissingFileNamesPath) {
  try {
    load_csv(std::filesystem::path("/no/such/file.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FileNotFound);
    EXPECT_NE(std::string(e.what()).find("/no/such/file.csv"), std::string::npos);
  }
}

TEST(Csv, WriteThenReadRoundTrip) {
  Corpus c = tiny_corpus();
  c.records[0].url = "x,\"y\"";
  c.records[1].provenance = Provenance::Synthetic;
  std::ostringstream out;
  write_csv(out, c, true);
  std::istringstream in(out.str());
  const Corpus back = load_csv(in);
  EXPECT_EQ(back.records, c.records);
}

TEST(Split, SizesAndDisjointness) {
  const Corpus c = generate_synthetic_corpus({.size = 1001, .seed = 3});
  for (bool strat : {false, true}) {
    const DatasetSplit s = split(c, 0.8, 42, strat);
    EXPECT_EQ(s.train_indices.size(), 801u);  // round(800.8)
    EXPECT_EQ(s.train_indices.size() + s.test_indices.size(), c.size());
    std::set<std::size_t> all(s.train_indices.begin(), s.train_indices.end());
    all.insert(s.test_indices.begin(), s.test_indices.end());
    EXPECT_EQ(all.size(), c.size());
  }
}

TEST(Split, DeterministicInSeed) {
  const Corpus c = generate_synthetic_corpus({.size = 200, .seed = 1});
  EXPECT_EQ(split(c, 0.8, 7).train_indices, split(c, 0.8, 7).train_indices);
  EXPECT_NE(split(c, 0.8, 7).train_indices, split(c, 0.8, 8).train_indices);
}

TEST(Split, StratifiedKeepsClassShares) {
  const Corpus c = generate_synthetic_corpus({.size = 5000, .seed = 2});
  const DatasetSplit s = split(c, 0.8, 42, true);
  const auto all = c.class_counts();
  const auto tr = c.subset(s.train_indices).class_counts();
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    EXPECT_LE(std::abs(static_cast<double>(tr[k]) - 0.8 * static_cast<double>(all[k])), 1.0);
  }
}

TEST(Split, RejectsTinyCorpusAndBadRatio) {
  Corpus one;
  one.records.push_back({"a", 0, Provenance::Original});
  EXPECT_THROW(split(one, 0.8, 1), Error);
  EXPECT_THROW(split(tiny_corpus(), 1.0, 1), Error);
}

TEST(Apportion, LargestRemainder) {
  EXPECT_EQ(apportion({5, 3, 2}, 5), (std::vector<std::size_t>{3, 1, 1}));
  EXPECT_EQ(apportion({1, 1, 1}, 2), (std::vector<std::size_t>{1, 1, 0}));
}

TEST(Subsample, StratifiedSizeAndOrder) {
  const Corpus c = generate_synthetic_corpus({.size = 3000, .seed = 4});
  const Corpus s = stratified_subsample(c, 1200, 42);
  EXPECT_EQ(s.size(), 1200u);
  const auto a = c.class_counts(), b = s.class_counts();
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    EXPECT_LE(std::abs(static_cast<double>(b[k]) - 0.4 * static_cast<double>(a[k])), 1.0);
  }
}

TEST(Augment, AddsRoundedFractionAndPreservesCharacters) {
  const Corpus c = generate_synthetic_corpus({.size = 2000, .seed = 5});
  const std::size_t malware = c.class_counts()[2];
  const Corpus a = augment_minority(c, 2, 0.2, 9);
  EXPECT_EQ(a.size(), c.size() + round_half_up(0.2 * static_cast<double>(malware)));
  EXPECT_TRUE(std::equal(c.records.begin(), c.records.end(), a.records.begin()));
  std::multiset<std::multiset<char>> sources;
  for (const auto& r : c.records)
    if (r.label == 2) sources.insert(std::multiset<char>(r.url.begin(), r.url.end()));
  for (std::size_t i = c.size(); i < a.size(); ++i) {
    EXPECT_EQ(a.records[i].label, 2);
    EXPECT_EQ(a.records[i].provenance, Provenance::Augmented);
    EXPECT_TRUE(sources.contains(std::multiset<char>(a.records[i].url.begin(), a.records[i].url.end())));
  }
}

TEST(Augment, EmptyClassThrows) {
  Corpus c = tiny_corpus();
  std::erase_if(c.records, [](const Record& r) { return r.label == 2; });
  try {
    augment_minority(c, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyClass);
  }
}

TEST(Crossover, PrefixAndSuffix) {
  EXPECT_EQ(crossover("abcdef", "uvwxyz", 2), "abwxyz");
  EXPECT_EQ(crossover("ab", "uvwxyz", 4), "abyz");
}

TEST(Oversample, ReachesTargetWithCrossovers) {
  const Corpus c = generate_synthetic_corpus({.size = 2000, .seed = 6});
  const std::size_t target = largest_minority_count(c);
  const Corpus o = oversample(c, {2, 3}, 11);
  const auto counts = o.class_counts();
  EXPECT_EQ(counts[2], std::max(target, c.class_counts()[2]));
  EXPECT_EQ(counts[3], std::max(target, c.class_counts()[3]));
  EXPECT_EQ(counts[0], c.class_counts()[0]);
  for (std::size_t i = c.size(); i < o.size(); ++i) {
    EXPECT_EQ(o.records[i].provenance, Provenance::Synthetic);
    EXPECT_FALSE(o.records[i].url.empty());
  }
}

TEST(Oversample, NeedsTwoMembers) {
  Corpus c = tiny_corpus();
  std::erase_if(c.records, [](const Record& r) { return r.url == "j.ru/n.exe"; });
  try {
    oversample(c, {2}, 1, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewSamples);
  }
}

TEST(Batches, CoverEveryIndexOnceAndVaryByEpoch) {
  std::vector<std::size_t> idx(70);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const auto b0 = batches(idx, 32, 42, 0), b1 = batches(idx, 32, 42, 1);
  ASSERT_EQ(b0.size(), 3u);
  EXPECT_EQ(b0[2].size(), 6u);
  std::vector<std::size_t> flat;
  for (const auto& b : b0) flat.insert(flat.end(), b.begin(), b.end());
  std::sort(flat.begin(), flat.end());
  EXPECT_EQ(flat, idx);
  EXPECT_NE(b0, b1);
  EXPECT_EQ(b0, batches(idx, 32, 42, 0));
}

TEST(Synthetic, DeterministicWithReferenceShares) {
  const Corpus a = generate_synthetic_corpus({.size = 12000, .seed = 42});
  EXPECT_EQ(a.records, generate_synthetic_corpus({.size = 12000, .seed = 42}).records);
  const auto counts = a.class_counts();
  const double total = 651191.0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    EXPECT_NEAR(static_cast<double>(counts[k]) / 12000.0, static_cast<double>(kReferenceClassCounts[k]) / total, 0.002);
  }
}

TEST(PrepareData, BalancesOnlyTheTrainingPart) {
  RunConfig cfg;
  cfg.synthetic_size = 1000;
  const PreparedData d = prepare_data(cfg);
  EXPECT_EQ(d.test.size(), 200u);
  EXPECT_GT(d.train.size(), 800u);
  for (const auto& r : d.test.records) EXPECT_EQ(r.provenance, Provenance::Original);
  const auto tc = d.train.class_counts();
  EXPECT_EQ(tc[2], tc[3]);
}

TEST(RunConfig, MergeRejectsUnknownKeys) {
  EXPECT_THROW(merge_config(RunConfig{}, nlohmann::json{{"epoch", 3}}), Error);
  const RunConfig c = merge_config(RunConfig{}, nlohmann::json{{"epochs", 3}, {"readout", "mean"}});
  EXPECT_EQ(c.epochs, 3u);
  EXPECT_EQ(c.model().readout, Readout::Mean);
}
