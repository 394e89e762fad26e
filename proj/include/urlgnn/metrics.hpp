// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

// Classification metrics, confusion matrices and one-vs-rest ROC analysis.
//
// Conventions:
//  - precision/recall with a zero denominator are 0 and the class is flagged
//    `degenerate`;
//  - ROC thresholds are the distinct scores in descending order, preceded by
//    a sentinel max_score + 1 that yields the (0,0) point; a sample is called
//    positive when score >= threshold;
//  - the macro ROC curve averages per-class TPR on the FPR grid
//    {0, 0.01, ..., 1}; macro AUC averages the exact per-class AUCs.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "urlgnn/data.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/inference.hpp"
#include "urlgnn/model.hpp"

namespace urlgnn {

using ConfusionMatrix = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;
using NormalizedConfusion = std::array<std::array<double, kNumClasses>, kNumClasses>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool degenerate = false;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct AverageMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  friend bool operator==(const AverageMetrics&, const AverageMetrics&) = default;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  bool available = false;  // false when the class has no positives or no negatives
  std::vector<RocPoint> points;
  double auc = 0.0;

  friend bool operator==(const RocCurve&, const RocCurve&) = default;
};

struct MetricsReport {
  std::string split = "test";
  std::size_t total = 0;
  double accuracy = 0.0;
  std::array<ClassMetrics, kNumClasses> per_class{};
  AverageMetrics macro;
  AverageMetrics weighted;
  ConfusionMatrix confusion{};
  NormalizedConfusion confusion_normalized{};
  std::array<bool, kNumClasses> zero_support_rows{};
  std::array<RocCurve, kNumClasses> roc{};
  double macro_auc = 0.0;
  std::vector<std::pair<double, double>> macro_roc;  // (fpr, mean tpr)

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

inline void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorKind::LengthMismatch, std::to_string(a) + " labels vs " + std::to_string(b) + " predictions");
  if (a == 0) throw Error(ErrorKind::LengthMismatch, "no samples");
}

inline void check_class(int c) {
  if (c < 0 || c >= static_cast<int>(kNumClasses)) throw Error(ErrorKind::BadTarget, "class id " + std::to_string(c));
}

/// Entry [i][j] counts samples of true class i predicted as j.
inline ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  ConfusionMatrix m{};
  for (std::size_t k = 0; k < y_true.size(); ++k) {
    check_class(y_true[k]);
    check_class(y_pred[k]);
    ++m[static_cast<std::size_t>(y_true[k])][static_cast<std::size_t>(y_pred[k])];
  }
  return m;
}

/// Row-normalised confusion matrix; zero-support rows stay zero and are flagged.
inline NormalizedConfusion normalize_rows(const ConfusionMatrix& m, std::array<bool, kNumClasses>* zero_rows = nullptr) {
  NormalizedConfusion out{};
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    const std::size_t support = std::accumulate(m[i].begin(), m[i].end(), std::size_t{0});
    if (zero_rows) (*zero_rows)[i] = support == 0;
    if (support == 0) continue;
    for (std::size_t j = 0; j < kNumClasses; ++j) out[i][j] = static_cast<double>(m[i][j]) / static_cast<double>(support);
  }
  return out;
}

/// Accuracy, per-class precision/recall/F1/support, macro and weighted
/// averages, and the confusion matrix. ROC fields are left empty.
inline MetricsReport classification_report(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  MetricsReport r;
  r.confusion = confusion_matrix(y_true, y_pred);
  r.confusion_normalized = normalize_rows(r.confusion, &r.zero_support_rows);
  r.total = y_true.size();
  std::size_t trace = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::size_t tp = r.confusion[c][c];
    std::size_t predicted = 0, actual = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      predicted += r.confusion[k][c];
      actual += r.confusion[c][k];
    }
    trace += tp;
    ClassMetrics& m = r.per_class[c];
    m.support = actual;
    m.degenerate = predicted == 0 || actual == 0;
    m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  }
  r.accuracy = static_cast<double>(trace) / static_cast<double>(r.total);
  const double n = static_cast<double>(r.total);
  for (const ClassMetrics& m : r.per_class) {
    r.macro.precision += m.precision / static_cast<double>(kNumClasses);
    r.macro.recall += m.recall / static_cast<double>(kNumClasses);
    r.macro.f1 += m.f1 / static_cast<double>(kNumClasses);
  }
  // support_c * recall_c is tp_c, so the weighted recall numerator is the trace.
  double wp = 0.0, wf = 0.0;
  for (const ClassMetrics& m : r.per_class) {
    wp += m.precision * static_cast<double>(m.support);
    wf += m.f1 * static_cast<double>(m.support);
  }
  r.weighted.precision = wp / n;
  r.weighted.recall = static_cast<double>(trace) / n;
  r.weighted.f1 = wf / n;
  r.macro.support = r.weighted.support = r.total;
  return r;
}

/// One-vs-rest ROC points for binary labels (nonzero = positive).
inline std::vector<RocPoint> roc_curve(const std::vector<int>& labels, const std::vector<double>& scores) {
  check_lengths(labels.size(), scores.size());
  std::size_t positives = 0;
  for (int l : labels) positives += l != 0;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorKind::DegenerateLabels, "ROC needs at least one positive and one negative sample");
  }
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<RocPoint> pts;
  pts.push_back({0.0, 0.0, scores[order.front()] + 1.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    while (k < order.size() && scores[order[k]] == threshold) {
      (labels[order[k]] != 0 ? tp : fp) += 1;
      ++k;
    }
    pts.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                   static_cast<double>(tp) / static_cast<double>(positives), threshold});
  }
  return pts;
}

/// Trapezoidal area under the curve.
inline double auc(const std::vector<RocPoint>& pts) {
  if (pts.size() < 2) throw Error(ErrorKind::DegenerateLabels, "AUC needs at least two points");
  double area = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    area += (pts[k].fpr - pts[k - 1].fpr) * (pts[k].tpr + pts[k - 1].tpr) * 0.5;
  }
  return area;
}

inline double macro_auc(const std::vector<double>& aucs) {
  if (aucs.empty()) return 0.0;
  return std::accumulate(aucs.begin(), aucs.end(), 0.0) / static_cast<double>(aucs.size());
}

/// TPR of a curve at a given FPR: the highest TPR reached at exactly that FPR,
/// otherwise linear interpolation between the surrounding points.
inline double tpr_at(const std::vector<RocPoint>& pts, double fpr) {
  double best = -1.0;
  for (const auto& p : pts) {
    if (p.fpr == fpr) best = std::max(best, p.tpr);
  }
  if (best >= 0.0) return best;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k - 1].fpr < fpr && pts[k].fpr > fpr) {
      const double w = (fpr - pts[k - 1].fpr) / (pts[k].fpr - pts[k - 1].fpr);
      return pts[k - 1].tpr + w * (pts[k].tpr - pts[k - 1].tpr);
    }
  }
  return pts.back().tpr;
}

inline std::vector<std::pair<double, double>> macro_roc_curve(const std::array<RocCurve, kNumClasses>& curves) {
  std::vector<std::pair<double, double>> out;
  std::size_t used = 0;
  for (const auto& c : curves) used += c.available;
  if (used == 0) return out;
  for (int g = 0; g <= 100; ++g) {
    const double x = g / 100.0;
    double mean = 0.0;
    for (const auto& c : curves) {
      if (c.available) mean += tpr_at(c.points, x);
    }
    out.emplace_back(x, mean / static_cast<double>(used));
  }
  return out;
}

/// Full report from true labels and per-class scores (probabilities).
inline MetricsReport report_from_scores(const std::vector<int>& y_true,
                                        const std::vector<std::array<double, kNumClasses>>& scores,
                                        std::string split = "test") {
  check_lengths(y_true.size(), scores.size());
  std::vector<int> y_pred(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) y_pred[i] = argmax(scores[i]);
  MetricsReport r = classification_report(y_true, y_pred);
  r.split = std::move(split);
  std::vector<double> aucs;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::vector<int> binary(y_true.size());
    std::vector<double> s(y_true.size());
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      binary[i] = y_true[i] == static_cast<int>(c);
      s[i] = scores[i][c];
    }
    try {
      r.roc[c].points = roc_curve(binary, s);
      r.roc[c].auc = auc(r.roc[c].points);
      r.roc[c].available = true;
      aucs.push_back(r.roc[c].auc);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateLabels) throw;
    }
  }
  r.macro_auc = macro_auc(aucs);
  r.macro_roc = macro_roc_curve(r.roc);
  return r;
}

/// Tape-free evaluation of a model on every record of `corpus`.
inline MetricsReport evaluate_model(const ModelParams& params, const ModelConfig& config, const Corpus& corpus,
                                    std::size_t threads = 1, std::string split = "test") {
  if (corpus.size() == 0) throw Error(ErrorKind::TooFewSamples, "evaluation set is empty");
  const auto preds = predict_corpus(corpus, params, config, threads);
  std::vector<int> y_true;
  std::vector<std::array<double, kNumClasses>> scores;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    y_true.push_back(corpus.records[i].label);
    scores.push_back(preds[i].probabilities);
  }
  return report_from_scores(y_true, scores, std::move(split));
}

// ---------------------------------------------------------------------------
// Serialisation

inline void to_json(nlohmann::json& j, const ClassMetrics& m) {
  j = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}, {"degenerate", m.degenerate}};
}
inline void from_json(const nlohmann::json& j, ClassMetrics& m) {
  j.at("precision").get_to(m.precision);
  j.at("recall").get_to(m.recall);
  j.at("f1").get_to(m.f1);
  j.at("support").get_to(m.support);
  j.at("degenerate").get_to(m.degenerate);
}
inline void to_json(nlohmann::json& j, const AverageMetrics& m) {
  j = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}
inline void from_json(const nlohmann::json& j, AverageMetrics& m) {
  j.at("precision").get_to(m.precision);
  j.at("recall").get_to(m.recall);
  j.at("f1").get_to(m.f1);
  j.at("support").get_to(m.support);
}

/// Report document: one object keyed by field; per-class entries and ROC
/// curves are keyed by class name.
inline nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["split"] = r.split;
  j["total"] = r.total;
  j["accuracy"] = r.accuracy;
  for (std::size_t c = 0; c < kNumClasses; ++c) j["per_class"][std::string(kClassNames[c])] = r.per_class[c];
  j["macro_avg"] = r.macro;
  j["weighted_avg"] = r.weighted;
  j["confusion"]["labels"] = kClassNames;
  j["confusion"]["counts"] = r.confusion;
  j["confusion"]["normalized"] = r.confusion_normalized;
  j["confusion"]["zero_support_rows"] = r.zero_support_rows;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    nlohmann::json curve;
    curve["available"] = r.roc[c].available;
    curve["auc"] = r.roc[c].auc;
    curve["fpr"] = nlohmann::json::array();
    curve["tpr"] = nlohmann::json::array();
    curve["threshold"] = nlohmann::json::array();
    for (const auto& p : r.roc[c].points) {
      curve["fpr"].push_back(p.fpr);
      curve["tpr"].push_back(p.tpr);
      curve["threshold"].push_back(p.threshold);
    }
    j["roc"][std::string(kClassNames[c])] = std::move(curve);
  }
  j["macro_auc"] = r.macro_auc;
  j["macro_roc"] = r.macro_roc;
  return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport r;
  try {
    r.split = j.at("split").get<std::string>();
    r.total = j.at("total").get<std::size_t>();
    r.accuracy = j.at("accuracy").get<double>();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      r.per_class[c] = j.at("per_class").at(std::string(kClassNames[c])).get<ClassMetrics>();
    }
    r.macro = j.at("macro_avg").get<AverageMetrics>();
    r.weighted = j.at("weighted_avg").get<AverageMetrics>();
    r.confusion = j.at("confusion").at("counts").get<ConfusionMatrix>();
    r.confusion_normalized = j.at("confusion").at("normalized").get<NormalizedConfusion>();
    r.zero_support_rows = j.at("confusion").at("zero_support_rows").get<std::array<bool, kNumClasses>>();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const auto& curve = j.at("roc").at(std::string(kClassNames[c]));
      r.roc[c].available = curve.at("available").get<bool>();
      r.roc[c].auc = curve.at("auc").get<double>();
      const auto fpr = curve.at("fpr").get<std::vector<double>>();
      const auto tpr = curve.at("tpr").get<std::vector<double>>();
      const auto thr = curve.at("threshold").get<std::vector<double>>();
      if (fpr.size() != tpr.size() || fpr.size() != thr.size()) {
        throw Error(ErrorKind::LengthMismatch, "ROC arrays of different lengths");
      }
      for (std::size_t k = 0; k < fpr.size(); ++k) r.roc[c].points.push_back({fpr[k], tpr[k], thr[k]});
    }
    r.macro_auc = j.at("macro_auc").get<double>();
    r.macro_roc = j.at("macro_roc").get<std::vector<std::pair<double, double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadConfig, std::string("malformed report: ") + e.what());
  }
  return r;
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

/// `class,fpr,tpr,threshold`, classes in id order.
inline void write_roc_csv(std::ostream& out, const MetricsReport& r) {
  out << "class,fpr,tpr,threshold\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (const auto& p : r.roc[c].points) {
      out << kClassNames[c] << ',' << format_double(p.fpr) << ',' << format_double(p.tpr) << ','
          << format_double(p.threshold) << '\n';
    }
  }
}

/// `true_class,<predicted class names...>`, one row per true class; raw
/// counts or row-normalised rates.
inline void write_confusion_csv(std::ostream& out, const MetricsReport& r, bool normalized) {
  out << "true_class";
  for (auto name : kClassNames) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    out << kClassNames[i];
    for (std::size_t j = 0; j < kNumClasses; ++j) {
      out << ',';
      if (normalized) {
        out << format_double(r.confusion_normalized[i][j]);
      } else {
        out << r.confusion[i][j];
      }
    }
    out << '\n';
  }
}

/// Per-class bar-chart data: `class,precision,recall,f1,support`.
inline void write_per_class_csv(std::ostream& out, const MetricsReport& r) {
  out << "class,precision,recall,f1,support\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto& m = r.per_class[c];
    out << kClassNames[c] << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
        << format_double(m.f1) << ',' << m.support << '\n';
  }
}

/// Plain-text table in the familiar classification-report layout.
inline std::string format_report(const MetricsReport& r) {
  std::ostringstream s;
  s << "split=" << r.split << "\n\n";
  s << std::setw(14) << "" << std::setw(11) << "precision" << std::setw(11) << "recall" << std::setw(11) << "f1-score"
    << std::setw(11) << "support" << "\n\n";
  s << std::fixed << std::setprecision(4);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto& m = r.per_class[c];
    s << std::setw(14) << kClassNames[c] << std::setw(11) << m.precision << std::setw(11) << m.recall << std::setw(11)
      << m.f1 << std::setw(11) << m.support << (m.degenerate ? "  (degenerate)" : "") << '\n';
  }
  s << '\n'
    << std::setw(14) << "accuracy" << std::setw(11) << "" << std::setw(11) << "" << std::setw(11) << r.accuracy
    << std::setw(11) << r.total << '\n';
  auto avg = [&](const char* name, const AverageMetrics& a) {
    s << std::setw(14) << name << std::setw(11) << a.precision << std::setw(11) << a.recall << std::setw(11) << a.f1
      << std::setw(11) << a.support << '\n';
  };
  avg("macro avg", r.macro);
  avg("weighted avg", r.weighted);
  s << "\nROC AUC (one-vs-rest)\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    s << std::setw(14) << kClassNames[c] << std::setw(11);
    if (r.roc[c].available) {
      s << r.roc[c].auc << '\n';
    } else {
      s << "n/a" << '\n';
    }
  }
  s << std::setw(14) << "macro" << std::setw(11) << r.macro_auc << '\n';
  return s.str();
}

/// Writes report.json, report.txt, roc.csv, confusion.csv,
/// confusion_normalized.csv, per_class.csv and macro_roc.csv into `dir`.
inline void write_report_files(const std::filesystem::path& dir, const MetricsReport& r) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("report.json");
    out << report_to_json(r).dump(2) << '\n';
  }
  {
    auto out = open("report.txt");
    out << format_report(r);
  }
  {
    auto out = open("roc.csv");
    write_roc_csv(out, r);
  }
  {
    auto out = open("confusion.csv");
    write_confusion_csv(out, r, false);
  }
  {
    auto out = open("confusion_normalized.csv");
    write_confusion_csv(out, r, true);
  }
  {
    auto out = open("per_class.csv");
    write_per_class_csv(out, r);
  }
  {
    auto out = open("macro_roc.csv");
    out << "fpr,tpr\n";
    for (const auto& [x, y] : r.macro_roc) out << format_double(x) << ',' << format_double(y) << '\n';
  }
}

inline MetricsReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open report " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadConfig, std::string("malformed report: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace urlgnn
