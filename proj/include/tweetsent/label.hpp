#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace tweetsent {

/// Three-way sentiment class. The numeric values are the class indices used by
/// every classifier and by the confusion matrix.
enum class SentimentLabel : std::size_t { Negative = 0, Neutral = 1, Positive = 2 };

inline constexpr std::size_t kNumClasses = 3;

inline constexpr std::array<SentimentLabel, kNumClasses> kAllLabels{
    SentimentLabel::Negative, SentimentLabel::Neutral, SentimentLabel::Positive};

constexpr std::size_t index_of(SentimentLabel l) noexcept { return static_cast<std::size_t>(l); }

constexpr SentimentLabel label_at(std::size_t i) noexcept { return static_cast<SentimentLabel>(i); }

constexpr std::string_view to_string(SentimentLabel l) noexcept {
  switch (l) {
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::Neutral: return "neutral";
    case SentimentLabel::Positive: return "positive";
  }
  return "?";
}

/// Case-insensitive parse of negative|neutral|positive.
inline std::optional<SentimentLabel> parse_label(std::string_view s) {
  std::string lower;
  lower.reserve(s.size());
  for (char c : s) {
    lower.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  for (auto l : kAllLabels) {
    if (lower == to_string(l)) return l;
  }
  return std::nullopt;
}

}  // namespace tweetsent
