#pragma once

// Descriptive corpus statistics and their CSV / SVG exports.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tweetsent/corpus.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/io.hpp"
#include "tweetsent/label.hpp"
#include "tweetsent/utf8.hpp"

namespace tweetsent {

/// Half-open bins [edges[i], edges[i+1]); the last bin is closed.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }

  bool operator==(const Histogram&) const = default;
};

enum class LengthMode { Characters, Tokens };

/// Bins of width `bin_width` starting at 0, as many as needed for the longest
/// text to land in the (closed) last bin.
inline Histogram tweet_length_histogram(const Corpus& corpus, std::size_t bin_width,
                                        LengthMode mode = LengthMode::Characters) {
  if (bin_width < 1) throw ValidationError("bin_width must be >= 1");
  if (corpus.empty()) throw ValidationError("cannot bin an empty corpus");
  std::vector<std::size_t> lengths;
  lengths.reserve(corpus.size());
  for (const auto& r : corpus) {
    lengths.push_back(mode == LengthMode::Characters ? utf8::length(r.text) : tokenize(r.text).size());
  }
  const std::size_t max = *std::max_element(lengths.begin(), lengths.end());
  const std::size_t n_bins = std::max<std::size_t>(1, (max + bin_width - 1) / bin_width);
  Histogram h;
  for (std::size_t i = 0; i <= n_bins; ++i) h.edges.push_back(static_cast<double>(i * bin_width));
  h.counts.assign(n_bins, 0);
  for (auto len : lengths) ++h.counts[std::min(len / bin_width, n_bins - 1)];
  return h;
}

/// Uniform bins over [-1, 1]; a value of exactly 1 falls in the last bin.
inline Histogram score_distribution(std::span<const double> scores, std::size_t n_bins) {
  if (n_bins < 1) throw ValidationError("n_bins must be >= 1");
  Histogram h;
  const double n = static_cast<double>(n_bins);
  for (std::size_t i = 0; i <= n_bins; ++i) {
    h.edges.push_back(-1.0 + 2.0 * static_cast<double>(i) / n);
  }
  h.counts.assign(n_bins, 0);
  for (double v : scores) {
    const double clamped = std::clamp(v, -1.0, 1.0);
    auto bin = static_cast<std::size_t>(std::floor((clamped + 1.0) * n / 2.0));
    ++h.counts[std::min(bin, n_bins - 1)];
  }
  return h;
}

inline std::string histogram_to_csv(const Histogram& h) {
  std::string out = "bin_start,bin_end,count\n";
  char buf[96];
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g,%g,%zu\n", h.edges[i], h.edges[i + 1], h.counts[i]);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word frequencies

struct FrequencyTable {
  std::vector<std::pair<std::string, std::size_t>> entries;  // count desc, token asc

  bool operator==(const FrequencyTable&) const = default;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

inline FrequencyTable frequency_table(std::span<const std::vector<std::string>> docs,
                                      std::size_t top_k = kUnlimited) {
  if (top_k < 1) throw ValidationError("top_k must be >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (const auto& t : doc) ++counts[t];
  }
  FrequencyTable table;
  table.entries.assign(counts.begin(), counts.end());
  std::sort(table.entries.begin(), table.entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (table.entries.size() > top_k) table.entries.resize(top_k);
  return table;
}

/// Per-label token counts; `groups[label]` holds that label's preprocessed
/// (stopword-free) documents.
inline std::array<FrequencyTable, kNumClasses> wordcloud_frequencies(
    const std::array<std::vector<std::vector<std::string>>, kNumClasses>& groups,
    std::size_t top_k = kUnlimited) {
  std::array<FrequencyTable, kNumClasses> out;
  for (std::size_t c = 0; c < kNumClasses; ++c) out[c] = frequency_table(groups[c], top_k);
  return out;
}

inline std::string frequencies_to_csv(const std::array<FrequencyTable, kNumClasses>& tables) {
  std::string out = "label,token,count\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (const auto& [token, count] : tables[c].entries) {
      out += std::string(to_string(label_at(c))) + ',';
      io::append_csv_field(out, token);
      out += ',' + std::to_string(count) + '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Daily series

struct DailyPoint {
  std::string date;  // YYYY-MM-DD, UTC
  double mean_polarity = 0.0;
  std::size_t count = 0;

  bool operator==(const DailyPoint&) const = default;
};

struct DailySentiment {
  std::vector<DailyPoint> points;  // ascending by date
  std::size_t undated = 0;         // records without a timestamp, excluded above
};

inline DailySentiment daily_sentiment(const Corpus& corpus, std::span<const double> scores) {
  if (scores.size() != corpus.size()) throw ValidationError("scores are not aligned to records");
  std::map<std::string, std::pair<double, std::size_t>> by_day;
  DailySentiment out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].timestamp) {
      ++out.undated;
      continue;
    }
    auto& [sum, n] = by_day[format_date(*corpus[i].timestamp)];
    sum += scores[i];
    ++n;
  }
  for (const auto& [date, acc] : by_day) {
    const double mean = acc.first / static_cast<double>(acc.second);
    out.points.push_back({date, std::clamp(mean, -1.0, 1.0), acc.second});
  }
  return out;
}

inline std::string daily_to_csv(const DailySentiment& series) {
  std::string out = "date,mean_polarity,count\n";
  char buf[96];
  for (const auto& p : series.points) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%zu\n", p.date.c_str(), p.mean_polarity, p.count);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG bar charts
//
// Fixed 800x400 canvas; plot area inset 70/20/30/80 (left/right/top/bottom).
// One <rect class="bar"> per value, a title, axis labels and five y ticks.
// Numbers are printed with two decimals so output is byte-stable.

struct ChartLabels {
  std::string title;
  std::string x_axis;
  std::string y_axis;
};

struct BarChart {
  ChartLabels labels;
  std::vector<std::string> categories;
  std::vector<double> values;
};

namespace report_detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace report_detail

inline std::string render_bar_chart(const BarChart& chart) {
  namespace d = report_detail;
  if (chart.values.empty()) throw ValidationError("nothing to chart");
  if (chart.categories.size() != chart.values.size()) {
    throw ValidationError("chart categories and values differ in length");
  }
  constexpr double kWidth = 800, kHeight = 400;
  constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 80;
  constexpr double plot_w = kWidth - kLeft - kRight;
  constexpr double plot_h = kHeight - kTop - kBottom;
  const double max_value = std::max(1.0, *std::max_element(chart.values.begin(), chart.values.end()));
  const double slot = plot_w / static_cast<double>(chart.values.size());
  const double bar_w = slot * 0.8;
  // Label every category when they fit, otherwise every k-th.
  const std::size_t label_step = std::max<std::size_t>(1, chart.values.size() / 20);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"400.00\" y=\"20.00\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
       d::xml_escape(chart.labels.title) + "</text>\n";
  s += "<line x1=\"" + d::num(kLeft) + "\" y1=\"" + d::num(kTop + plot_h) + "\" x2=\"" +
       d::num(kLeft + plot_w) + "\" y2=\"" + d::num(kTop + plot_h) + "\" stroke=\"#000000\"/>\n";
  s += "<line x1=\"" + d::num(kLeft) + "\" y1=\"" + d::num(kTop) + "\" x2=\"" + d::num(kLeft) +
       "\" y2=\"" + d::num(kTop + plot_h) + "\" stroke=\"#000000\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = max_value * t / 4.0;
    const double y = kTop + plot_h - plot_h * t / 4.0;
    s += "<text x=\"" + d::num(kLeft - 6) + "\" y=\"" + d::num(y + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + d::tick_label(v) +
         "</text>\n";
  }
  for (std::size_t i = 0; i < chart.values.size(); ++i) {
    const double h = plot_h * std::max(0.0, chart.values[i]) / max_value;
    const double x = kLeft + slot * static_cast<double>(i) + (slot - bar_w) / 2.0;
    s += "<rect class=\"bar\" x=\"" + d::num(x) + "\" y=\"" + d::num(kTop + plot_h - h) +
         "\" width=\"" + d::num(bar_w) + "\" height=\"" + d::num(h) + "\" fill=\"#1f77b4\"/>\n";
    if (i % label_step == 0) {
      const double cx = x + bar_w / 2.0;
      const double cy = kTop + plot_h + 12;
      s += "<text x=\"" + d::num(cx) + "\" y=\"" + d::num(cy) + "\" transform=\"rotate(45 " +
           d::num(cx) + " " + d::num(cy) + ")\" font-family=\"sans-serif\" font-size=\"9\">" +
           d::xml_escape(chart.categories[i]) + "</text>\n";
    }
  }
  s += "<text x=\"" + d::num(kLeft + plot_w / 2) + "\" y=\"" + d::num(kHeight - 8) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
       d::xml_escape(chart.labels.x_axis) + "</text>\n";
  s += "<text x=\"16.00\" y=\"" + d::num(kTop + plot_h / 2) + "\" transform=\"rotate(-90 16.00 " +
       d::num(kTop + plot_h / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
       d::xml_escape(chart.labels.y_axis) + "</text>\n";
  s += "</svg>\n";
  return s;
}

inline BarChart to_chart(const Histogram& h, ChartLabels labels) {
  BarChart c{std::move(labels), {}, {}};
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    c.categories.push_back(report_detail::tick_label(h.edges[i]) + "-" +
                           report_detail::tick_label(h.edges[i + 1]));
    c.values.push_back(static_cast<double>(h.counts[i]));
  }
  return c;
}

inline BarChart to_chart(const FrequencyTable& t, ChartLabels labels) {
  BarChart c{std::move(labels), {}, {}};
  for (const auto& [token, count] : t.entries) {
    c.categories.push_back(token);
    c.values.push_back(static_cast<double>(count));
  }
  return c;
}

inline void emit_chart(const Histogram& h, const ChartLabels& labels,
                       const std::filesystem::path& path) {
  io::write_file_atomic(path, render_bar_chart(to_chart(h, labels)));
}

inline void emit_chart(const FrequencyTable& t, const ChartLabels& labels,
                       const std::filesystem::path& path) {
  io::write_file_atomic(path, render_bar_chart(to_chart(t, labels)));
}

}  // namespace tweetsent
