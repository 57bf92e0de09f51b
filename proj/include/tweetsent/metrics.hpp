#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "tweetsent/error.hpp"
#include "tweetsent/io.hpp"
#include "tweetsent/label.hpp"

namespace tweetsent {

/// K x K counts; rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t k = kNumClasses) : k_(k), counts_(k * k, 0) {
    if (k == 0) throw ValidationError("confusion matrix needs at least one class");
  }

  /// Builds from explicit row-major counts.
  ConfusionMatrix(std::size_t k, std::vector<std::size_t> counts)
      : k_(k), counts_(std::move(counts)) {
    if (k == 0 || counts_.size() != k * k) throw ValidationError("confusion matrix shape mismatch");
  }

  std::size_t classes() const noexcept { return k_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * k_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted) {
    if (truth >= k_ || predicted >= k_) throw ValidationError("label out of range");
    ++counts_[truth * k_ + predicted];
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts_) t += c;
    return t;
  }
  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < k_; ++i) t += at(i, i);
    return t;
  }
  std::size_t row_sum(std::size_t c) const {
    std::size_t s = 0;
    for (std::size_t j = 0; j < k_; ++j) s += at(c, j);
    return s;
  }
  std::size_t col_sum(std::size_t c) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += at(i, c);
    return s;
  }

  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t k_;
  std::vector<std::size_t> counts_;
};

inline ConfusionMatrix confusion(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted,
                                 std::size_t k = kNumClasses) {
  if (truth.size() != predicted.size()) throw ValidationError("label lists differ in length");
  ConfusionMatrix m(k);
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
  return m;
}

inline ConfusionMatrix confusion(std::span<const SentimentLabel> truth,
                                 std::span<const SentimentLabel> predicted) {
  if (truth.size() != predicted.size()) throw ValidationError("label lists differ in length");
  ConfusionMatrix m(kNumClasses);
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(index_of(truth[i]), index_of(predicted[i]));
  return m;
}

/// trace / total: the multi-class form of (TP + TN) / (TP + TN + FP + FN).
inline double accuracy(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) throw ValidationError("accuracy of an empty confusion matrix");
  return static_cast<double>(m.trace()) / static_cast<double>(total);
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  /// Set when a denominator was zero and the metric was reported as 0.
  bool undefined_precision = false;
  bool undefined_recall = false;

  bool operator==(const ClassMetrics&) const = default;
};

/// 2PR / (P + R), 0 when P + R = 0.
inline double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

inline ClassMetrics class_metrics(const ConfusionMatrix& m, std::size_t c) {
  if (c >= m.classes()) throw ValidationError("class index out of range");
  ClassMetrics r;
  const auto tp = static_cast<double>(m.at(c, c));
  const auto predicted = m.col_sum(c);
  r.support = m.row_sum(c);
  r.undefined_precision = predicted == 0;
  r.undefined_recall = r.support == 0;
  r.precision = predicted ? tp / static_cast<double>(predicted) : 0.0;
  r.recall = r.support ? tp / static_cast<double>(r.support) : 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvaluationReport {
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  AveragedMetrics macro;     // unweighted mean over all K classes
  AveragedMetrics weighted;  // support-weighted mean
  ConfusionMatrix matrix;
  std::size_t total = 0;
};

inline EvaluationReport classification_report(const ConfusionMatrix& m) {
  EvaluationReport r{{}, accuracy(m), {}, {}, m, m.total()};
  const double k = static_cast<double>(m.classes());
  const double n = static_cast<double>(r.total);
  for (std::size_t c = 0; c < m.classes(); ++c) {
    const auto cm = class_metrics(m, c);
    r.macro.precision += cm.precision / k;
    r.macro.recall += cm.recall / k;
    r.macro.f1 += cm.f1 / k;
    const double w = static_cast<double>(cm.support) / n;
    r.weighted.precision += cm.precision * w;
    r.weighted.recall += cm.recall * w;
    r.weighted.f1 += cm.f1 * w;
    r.per_class.push_back(cm);
  }
  return r;
}

inline std::vector<std::string> default_class_names() {
  std::vector<std::string> names;
  for (auto l : kAllLabels) names.emplace_back(to_string(l));
  return names;
}

/// Column-aligned text table with two-decimal values. Metrics that fell back
/// to 0 because of an empty denominator are marked with '*'.
inline std::string format_report(const EvaluationReport& r,
                                 const std::vector<std::string>& names = default_class_names()) {
  std::string out;
  char buf[160];
  std::size_t width = 12;
  for (const auto& n : names) width = std::max(width, n.size());
  const int w = static_cast<int>(width);
  std::snprintf(buf, sizeof buf, "%*s %10s %10s %10s %10s\n\n", w, "", "precision", "recall",
                "f1-score", "support");
  out += buf;
  bool any_undefined = false;
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    const bool undefined = m.undefined_precision || m.undefined_recall;
    any_undefined |= undefined;
    std::snprintf(buf, sizeof buf, "%*s %10.2f %10.2f %10.2f %10zu%s\n", w,
                  c < names.size() ? names[c].c_str() : std::to_string(c).c_str(), m.precision,
                  m.recall, m.f1, m.support, undefined ? " *" : "");
    out += buf;
  }
  out += "\n";
  std::snprintf(buf, sizeof buf, "%*s %10s %10s %10.2f %10zu\n", w, "accuracy", "", "",
                r.accuracy, r.total);
  out += buf;
  std::snprintf(buf, sizeof buf, "%*s %10.2f %10.2f %10.2f %10zu\n", w, "macro avg",
                r.macro.precision, r.macro.recall, r.macro.f1, r.total);
  out += buf;
  std::snprintf(buf, sizeof buf, "%*s %10.2f %10.2f %10.2f %10zu\n", w, "weighted avg",
                r.weighted.precision, r.weighted.recall, r.weighted.f1, r.total);
  out += buf;
  if (any_undefined) out += "\n* zero denominator; metric reported as 0\n";
  return out;
}

/// `class,precision,recall,f1,support`
inline std::string report_to_csv(const EvaluationReport& r,
                                 const std::vector<std::string>& names = default_class_names()) {
  std::string out = "class,precision,recall,f1,support\n";
  char buf[128];
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    io::append_csv_field(out, c < names.size() ? names[c] : std::to_string(c));
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%zu\n", m.precision, m.recall, m.f1, m.support);
    out += buf;
  }
  return out;
}

/// Header row of predicted class names, then one row per true class.
inline std::string matrix_to_csv(const ConfusionMatrix& m,
                                 const std::vector<std::string>& names = default_class_names()) {
  const auto name = [&](std::size_t i) { return i < names.size() ? names[i] : std::to_string(i); };
  std::string out = "true\\predicted";
  for (std::size_t j = 0; j < m.classes(); ++j) {
    out += ',';
    io::append_csv_field(out, name(j));
  }
  out += '\n';
  for (std::size_t i = 0; i < m.classes(); ++i) {
    io::append_csv_field(out, name(i));
    for (std::size_t j = 0; j < m.classes(); ++j) out += ',' + std::to_string(m.at(i, j));
    out += '\n';
  }
  return out;
}

}  // namespace tweetsent
