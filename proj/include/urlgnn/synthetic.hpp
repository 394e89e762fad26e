// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic generator for a labelled URL corpus that mimics the lexical
// habits of the four classes (bare benign hosts and article paths, Joomla
// style defacement query strings, raw-IP malware droppers, brand-spoofing
// phishing hosts). Used when the real dataset is not available.

#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "urlgnn/data.hpp"
#include "urlgnn/rng.hpp"

namespace urlgnn {

/// Class shares of the public malicious-URL corpus (651,191 rows).
inline constexpr std::array<std::size_t, kNumClasses> kReferenceClassCounts = {428103, 96457, 32577, 94054};

struct SyntheticOptions {
  std::size_t size = 12000;
  std::uint64_t seed = 42;
  /// Share of each class drawn from another class's templates.
  double confusion = 0.02;
};

namespace synth {

inline const std::vector<std::string> kWords = {
    "music", "news", "sports", "travel", "photo", "story", "world", "local", "review", "guide", "movie", "games",
    "people", "history", "science", "health", "garden", "recipe", "school", "market", "design", "energy",
    "career", "family", "season", "player", "artist", "county", "museum", "library", "theater", "league",
    "river", "mountain", "ocean", "city", "forest", "summer", "winter", "journal", "archive", "classic"};
inline const std::vector<std::string> kNames = {
    "john", "mary", "smith", "brown", "lee", "garcia", "miller", "davis", "wilson", "taylor", "anderson",
    "thomas", "moore", "martin", "jackson", "white", "harris", "clark", "lewis", "walker", "young", "king"};
inline const std::vector<std::string> kBenignHosts = {
    "en.wikipedia.org", "youtube.com", "facebook.com", "imdb.com", "espn.go.com", "amazon.com", "nytimes.com",
    "bbc.co.uk", "reddit.com", "linkedin.com", "twitter.com", "tripadvisor.com", "yelp.com", "about.com",
    "answers.com", "genealogy.com", "myspace.com", "ehow.com", "allmusic.com", "mlb.com", "nba.com"};
inline const std::vector<std::string> kTlds = {"com", "org", "net", "edu", "info", "co.uk", "de", "ca"};
inline const std::vector<std::string> kCountryTlds = {"com.br", "it", "nl", "pl", "hu", "gr", "ro", "cz",
                                                      "sk", "es", "pt", "org", "net", "de", "com"};
inline const std::vector<std::string> kJoomlaOptions = {"com_content", "com_k2", "com_virtuemart", "com_contact",
                                                        "com_mailto", "com_user", "com_weblinks"};
inline const std::vector<std::string> kJoomlaViews = {"article", "item", "category", "section", "frontpage",
                                                      "itemlist", "login"};
inline const std::vector<std::string> kMalwareFiles = {"mozi.m", "mozi.a", "bins.sh", "i", "x86", "arm7",
                                                       "setup.exe", "update.exe", "invoice.doc", "payload.bin",
                                                       "svchost.exe", "patch.zip", "flash_player.exe"};
inline const std::vector<std::string> kMalwareDirs = {"bins", "wp-content/uploads", "images", "tmp", "download",
                                                      "files", "js", "admin/temp", "cgi-bin"};
inline const std::vector<std::string> kBrands = {"paypal", "apple", "appleid", "microsoft", "office365", "outlook",
                                                 "chase", "wellsfargo", "bankofamerica", "netflix", "amazon",
                                                 "dropbox", "docusign", "ebay", "itau", "santander", "adobe"};
inline const std::vector<std::string> kLures = {"login", "signin", "verify", "secure", "account", "update",
                                                "confirm", "webscr", "support", "billing", "unlock", "recovery"};
inline const std::vector<std::string> kFreeHosts = {"000webhostapp.com", "weebly.com", "wixsite.com",
                                                    "blogspot.com", "firebaseapp.com", "sites.google.com",
                                                    "bit.ly", "tinyurl.com", "ow.ly"};

inline std::string digits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.uniform_index(10)));
  return s;
}

inline std::string alnum(Rng& rng, std::size_t n, bool mixed_case = false) {
  static const std::string lower = "abcdefghijklmnopqrstuvwxyz0123456789";
  static const std::string mixed = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-";
  const std::string& pool = mixed_case ? mixed : lower;
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(pool[rng.uniform_index(pool.size())]);
  return s;
}

inline std::string domain(Rng& rng) {
  std::string d = rng.pick(kWords);
  if (rng.bernoulli(0.5)) d += rng.bernoulli(0.3) ? "-" + rng.pick(kWords) : rng.pick(kWords);
  return d + "." + rng.pick(kTlds);
}

inline std::string benign(Rng& rng) {
  switch (rng.uniform_index(8)) {
    case 6: return rng.pick(kBrands) + ".com/" + rng.pick(kLures) + "/" + rng.pick(kWords);
    case 7:
      return "http://" + domain(rng) + "/" + rng.pick(kWords) + ".php?id=" + digits(rng, 1 + rng.uniform_index(4));
    case 0: {
      std::string t = rng.pick(kNames);
      t[0] = static_cast<char>(std::toupper(t[0]));
      return "en.wikipedia.org/wiki/" + t + "_" + rng.pick(kWords);
    }
    case 1: return "youtube.com/watch?v=" + alnum(rng, 11, true);
    case 2:
      return rng.pick(kBenignHosts) + "/" + rng.pick(kWords) + "/" + rng.pick(kNames) + "-" + rng.pick(kNames);
    case 3:
      return domain(rng) + "/" + rng.pick(kWords) + "/" + digits(rng, 4) + "/" + digits(rng, 2) + "/" +
             rng.pick(kWords) + "-" + rng.pick(kWords) + ".html";
    case 4: return "www." + domain(rng) + "/" + rng.pick(kNames) + "/" + rng.pick(kWords) + ".htm";
    default: return rng.pick(kBenignHosts) + "/" + rng.pick(kNames) + "_" + rng.pick(kNames);
  }
}

inline std::string defacement(Rng& rng) {
  const std::string host = "http://" + std::string(rng.bernoulli(0.7) ? "www." : "") + rng.pick(kWords) +
                           rng.pick(kNames) + "." + rng.pick(kCountryTlds);
  switch (rng.uniform_index(5)) {
    case 4: return host + "/" + rng.pick(kWords) + "/" + rng.pick(kWords) + "-" + rng.pick(kNames) + ".html";
    case 0:
      return host + "/index.php?option=" + rng.pick(kJoomlaOptions) + "&view=" + rng.pick(kJoomlaViews) +
             "&id=" + digits(rng, 1 + rng.uniform_index(3)) + "&Itemid=" + digits(rng, 1 + rng.uniform_index(3));
    case 1:
      return host + "/index.php?option=" + rng.pick(kJoomlaOptions) + "&task=view&id=" + digits(rng, 2) +
             "&Itemid=" + digits(rng, 2);
    case 2:
      return host + "/index.php/" + rng.pick(kWords) + "/" + digits(rng, 2) + "-" + rng.pick(kWords) + "-" +
             rng.pick(kWords);
    default:
      return host + "/?option=" + rng.pick(kJoomlaOptions) + "&view=" + rng.pick(kJoomlaViews) + "&layout=" +
             rng.pick(kWords);
  }
}

inline std::string ipv4(Rng& rng) {
  return std::to_string(1 + rng.uniform_index(222)) + "." + std::to_string(rng.uniform_index(256)) + "." +
         std::to_string(rng.uniform_index(256)) + "." + std::to_string(1 + rng.uniform_index(254));
}

inline std::string malware(Rng& rng) {
  switch (rng.uniform_index(5)) {
    case 4: return domain(rng) + "/" + rng.pick(kWords) + "/" + alnum(rng, 6 + rng.uniform_index(4)) + ".js";
    case 0: return "http://" + ipv4(rng) + ":" + std::to_string(1024 + rng.uniform_index(60000)) + "/" + rng.pick(kMalwareFiles);
    case 1: return "http://" + ipv4(rng) + "/" + rng.pick(kMalwareDirs) + "/" + rng.pick(kMalwareFiles);
    case 2:
      return alnum(rng, 6 + rng.uniform_index(6)) + "." + rng.pick(kTlds) + "/" + rng.pick(kMalwareDirs) + "/" +
             alnum(rng, 4 + rng.uniform_index(8)) + "." + (rng.bernoulli(0.5) ? "exe" : "zip");
    default:
      return "http://" + domain(rng) + "/" + rng.pick(kMalwareDirs) + "/" + digits(rng, 4) + "/" + digits(rng, 2) +
             "/" + rng.pick(kMalwareFiles);
  }
}

inline std::string phishing(Rng& rng) {
  const std::string brand = rng.pick(kBrands);
  const std::string lure = rng.pick(kLures);
  switch (rng.uniform_index(7)) {
    case 5: return domain(rng) + "/" + rng.pick(kWords) + "/" + alnum(rng, 8) + "/";
    case 6: return "http://" + ipv4(rng) + "/" + brand + "/" + lure + ".php";
    case 0: return brand + "." + lure + "-" + rng.pick(kLures) + "." + rng.pick(kTlds) + "/" + lure + "/";
    case 1: return alnum(rng, 8 + rng.uniform_index(8)) + "." + rng.pick(kFreeHosts) + "/" + brand + "/" + lure + ".php";
    case 2: return rng.pick(kFreeHosts) + "/" + alnum(rng, 5 + rng.uniform_index(3), true);
    case 3:
      return "www." + brand + "-" + lure + "." + rng.pick(kTlds) + "/" + lure + "/" + alnum(rng, 16) +
             "/index.html?email=" + rng.pick(kNames) + "@" + rng.pick(kWords) + ".com";
    default: return domain(rng) + "/" + brand + "/" + lure + "/" + rng.pick(kLures) + ".htm";
  }
}

inline std::string generate(int label, Rng& rng) {
  switch (label) {
    case 0: return benign(rng);
    case 1: return defacement(rng);
    case 2: return malware(rng);
    default: return phishing(rng);
  }
}

}  // namespace synth

/// Class counts follow the reference shares (largest remainder). A
/// `confusion` share of each class uses a different class's templates, so
/// a perfect score is out of reach.
inline Corpus generate_synthetic_corpus(const SyntheticOptions& opts = {}) {
  const auto counts = apportion(std::vector<std::size_t>(kReferenceClassCounts.begin(), kReferenceClassCounts.end()),
                                opts.size);
  Rng rng(opts.seed);
  Corpus corpus;
  corpus.records.reserve(opts.size);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t k = 0; k < counts[c]; ++k) {
      int style = static_cast<int>(c);
      if (rng.bernoulli(opts.confusion)) style = static_cast<int>((c + 1 + rng.uniform_index(kNumClasses - 1)) % kNumClasses);
      corpus.records.push_back({synth::generate(style, rng), static_cast<int>(c), Provenance::Original});
    }
  }
  rng.shuffle(corpus.records);
  return corpus;
}

}  // namespace urlgnn
