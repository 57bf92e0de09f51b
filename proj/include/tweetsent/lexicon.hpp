#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetsent/error.hpp"
#include "tweetsent/io.hpp"
#include "tweetsent/label.hpp"
#include "tweetsent/textprep.hpp"

namespace tweetsent {

/// AFINN-style valence list: word -> integer score in [-5, +5].
class AfinnLexicon {
 public:
  static constexpr int kMaxMagnitude = 5;

  AfinnLexicon() = default;

  /// Throws ValidationError on a non-lowercase key, an out-of-range score or
  /// a duplicate word.
  void add(std::string word, int score) {
    if (score < -kMaxMagnitude || score > kMaxMagnitude) {
      throw ValidationError("score out of range for '" + word + "'");
    }
    if (lowercase(word) != word) throw ValidationError("lexicon keys must be lowercase: " + word);
    if (!entries_.emplace(std::move(word), score).second) {
      throw ValidationError("duplicate lexicon word");
    }
  }

  const int* find(std::string_view word) const {
    auto it = entries_.find(std::string(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::unordered_map<std::string, int>& entries() const noexcept { return entries_; }

 private:
  std::unordered_map<std::string, int> entries_;
};

inline AfinnLexicon parse_afinn(std::string_view text, const std::string& source) {
  AfinnLexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError(source, line_no, "expected word<TAB>score");
    }
    const std::string_view value = line.substr(tab + 1);
    int score = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ParseError(source, line_no, "score is not an integer: '" + std::string(value) + "'");
    }
    try {
      lex.add(std::string(line.substr(0, tab)), score);
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return lex;
}

inline AfinnLexicon load_afinn(const std::filesystem::path& path) {
  return parse_afinn(io::read_file(path), path.string());
}

struct PolarityScore {
  double value = 0.0;    // in [-1, +1]
  std::size_t hits = 0;  // matched tokens

  bool operator==(const PolarityScore&) const = default;
};

/// Mean matched valence scaled into [-1, +1]: raw / (5 * hits), 0 when no
/// token matches. Expects lowercase, unstemmed tokens.
inline PolarityScore score_document(const std::vector<std::string>& tokens,
                                    const AfinnLexicon& lex) {
  long raw = 0;
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    if (const int* s = lex.find(t)) {
      raw += *s;
      ++hits;
    }
  }
  if (hits == 0) return {};
  const double value = static_cast<double>(raw) /
                       (static_cast<double>(AfinnLexicon::kMaxMagnitude) * static_cast<double>(hits));
  return {std::clamp(value, -1.0, 1.0), hits};
}

/// Tokens used for lexicon scoring: cleaned and lowercased surface words with
/// stopwords kept and no stemming, since the lexicon stores inflected forms.
inline std::vector<std::string> scoring_tokens(std::string_view raw) {
  return tokenize(lowercase(clean_text(raw)));
}

inline PolarityScore score_text(std::string_view raw, const AfinnLexicon& lex) {
  return score_document(scoring_tokens(raw), lex);
}

inline SentimentLabel label_from_score(const PolarityScore& score, double epsilon = 0.0) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  if (score.value > epsilon) return SentimentLabel::Positive;
  if (score.value < -epsilon) return SentimentLabel::Negative;
  return SentimentLabel::Neutral;
}

}  // namespace tweetsent
