#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tweetsent/error.hpp"
#include "tweetsent/io.hpp"
#include "tweetsent/porter.hpp"
#include "tweetsent/utf8.hpp"

namespace tweetsent {

using WordSet = std::unordered_set<std::string>;

enum class PosTag : std::uint8_t { NOUN, VERB, ADJ, ADV, DET, PRON, PREP, CONJ, NUM, OTHER };

constexpr std::string_view to_string(PosTag t) noexcept {
  constexpr std::string_view names[] = {"NOUN", "VERB", "ADJ",  "ADV", "DET",
                                        "PRON", "PREP", "CONJ", "NUM", "OTHER"};
  return names[static_cast<std::size_t>(t)];
}

inline std::optional<PosTag> parse_pos_tag(std::string_view s) {
  for (std::size_t i = 0; i <= static_cast<std::size_t>(PosTag::OTHER); ++i) {
    const auto t = static_cast<PosTag>(i);
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

struct Token {
  std::string surface;
  std::string stem;  // equals surface when stemming is disabled
  std::optional<PosTag> pos;

  bool operator==(const Token&) const = default;
};

/// Half-open token index range [begin, end).
struct ChunkRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const ChunkRange&) const = default;
};

struct TokenizedDocument {
  std::string source_id;
  std::vector<Token> tokens;
  std::optional<std::vector<ChunkRange>> chunks;

  std::vector<std::string> stems() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.stem);
    return out;
  }

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
  }

  bool operator==(const TokenizedDocument&) const = default;
};

// ---------------------------------------------------------------------------
// Stages

namespace textprep_detail {

inline bool starts_with_icase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace textprep_detail

/// Removes markup and everything that is not a letter.
///
/// HTML tags, URLs (http://, https://, www.) and @-mentions are dropped whole;
/// apostrophes are deleted so contractions stay one word; every other
/// non-letter (digits, punctuation, '#', symbols, emoji) becomes a space.
/// Whitespace runs collapse to one space and the result is trimmed.
inline std::string clean_text(std::string_view raw) {
  namespace d = textprep_detail;
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  const auto emit_space = [&] { pending_space = !out.empty(); };
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const char c = raw[pos];
    if (c == '<') {
      const auto close = raw.find('>', pos + 1);
      if (close != std::string_view::npos) {
        pos = close + 1;
        emit_space();
        continue;
      }
    }
    if (d::starts_with_icase(raw, pos, "http://") || d::starts_with_icase(raw, pos, "https://") ||
        d::starts_with_icase(raw, pos, "www.")) {
      while (pos < raw.size() && !d::is_space(raw[pos])) ++pos;
      emit_space();
      continue;
    }
    if (c == '@' && pos + 1 < raw.size() && d::is_word_char(raw[pos + 1])) {
      ++pos;
      while (pos < raw.size() && d::is_word_char(raw[pos])) ++pos;
      emit_space();
      continue;
    }
    const std::size_t start = pos;
    const char32_t cp = utf8::decode(raw, pos);
    if (cp == U'\'' || cp == U'’') continue;
    if (utf8::is_letter(cp)) {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.append(raw.substr(start, pos - start));
    } else {
      emit_space();
    }
  }
  return out;
}

inline std::string lowercase(std::string_view text) { return utf8::to_lower(text); }

/// Splits on whitespace; never yields empty tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && textprep_detail::is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !textprep_detail::is_space(text[pos])) ++pos;
    if (pos > start) out.emplace_back(text.substr(start, pos - start));
  }
  return out;
}

inline std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                                 const WordSet& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

inline std::string stem(std::string_view word) { return porter_stem(word); }

// ---------------------------------------------------------------------------
// Word lists

/// One lowercase word per line; blank lines and `#` comments ignored.
inline WordSet parse_word_list(std::string_view text, const std::string& source) {
  WordSet words;
  io::for_each_entry(text, [&](std::size_t line, std::string_view entry) {
    const auto b = entry.find_first_not_of(" \t");
    const auto e = entry.find_last_not_of(" \t");
    std::string word(entry.substr(b, e - b + 1));
    if (word.find_first_of(" \t") != std::string::npos) {
      throw ParseError(source, line, "expected a single word");
    }
    if (lowercase(word) != word) throw ParseError(source, line, "word must be lowercase");
    words.insert(std::move(word));
  });
  return words;
}

inline WordSet load_stopwords(const std::filesystem::path& path) {
  return parse_word_list(io::read_file(path), path.string());
}

/// Bundled English stoplist, stored with apostrophes removed so it matches
/// cleaned text ("don't" is cleaned to "dont").
inline const WordSet& default_stopwords() {
  static const WordSet words = [] {
    static constexpr std::string_view kWords[] = {
        "i",       "me",       "my",       "myself",   "we",         "our",      "ours",
        "ourselves", "you",    "youre",    "youve",    "youll",      "youd",     "your",
        "yours",   "yourself", "yourselves", "he",     "him",        "his",      "himself",
        "she",     "shes",     "her",      "hers",     "herself",    "it",       "its",
        "itself",  "they",     "them",     "their",    "theirs",     "themselves", "what",
        "which",   "who",      "whom",     "this",     "that",       "thatll",   "these",
        "those",   "am",       "is",       "are",      "was",        "were",     "be",
        "been",    "being",    "have",     "has",      "had",        "having",   "do",
        "does",    "did",      "doing",    "a",        "an",         "the",      "and",
        "but",     "if",       "or",       "because",  "as",         "until",    "while",
        "of",      "at",       "by",       "for",      "with",       "about",    "against",
        "between", "into",     "through",  "during",   "before",     "after",    "above",
        "below",   "to",       "from",     "up",       "down",       "in",       "out",
        "on",      "off",      "over",     "under",    "again",      "further",  "then",
        "once",    "here",     "there",    "when",     "where",      "why",      "how",
        "all",     "any",      "both",     "each",     "few",        "more",     "most",
        "other",   "some",     "such",     "no",       "nor",        "not",      "only",
        "own",     "same",     "so",       "than",     "too",        "very",     "s",
        "t",       "can",      "will",     "just",     "don",        "dont",     "should",
        "shouldve", "now",     "d",        "ll",       "m",          "o",        "re",
        "ve",      "y",        "ain",      "aren",     "arent",      "couldn",   "couldnt",
        "didn",    "didnt",    "doesn",    "doesnt",   "hadn",       "hadnt",    "hasn",
        "hasnt",   "haven",    "havent",   "isn",      "isnt",       "ma",       "mightn",
        "mightnt", "mustn",    "mustnt",   "needn",    "neednt",     "shan",     "shant",
        "shouldn", "shouldnt", "wasn",     "wasnt",    "weren",      "werent",   "won",
        "wont",    "wouldn",   "wouldnt"};
    WordSet set;
    for (auto w : kWords) set.emplace(w);
    return set;
  }();
  return words;
}

// ---------------------------------------------------------------------------
// Part-of-speech tagging and noun-phrase chunking

using ClosedClassLexicon = std::unordered_map<std::string, PosTag>;

/// `word<TAB>TAG` per line; duplicate words and unknown tags are errors.
inline ClosedClassLexicon parse_closed_class_lexicon(std::string_view text,
                                                     const std::string& source) {
  ClosedClassLexicon lex;
  io::for_each_entry(text, [&](std::size_t line, std::string_view entry) {
    const auto tab = entry.find('\t');
    if (tab == std::string_view::npos) throw ParseError(source, line, "expected word<TAB>TAG");
    std::string word(entry.substr(0, tab));
    const auto tag = parse_pos_tag(entry.substr(tab + 1));
    if (word.empty() || !tag) throw ParseError(source, line, "malformed closed-class entry");
    if (!lex.emplace(std::move(word), *tag).second) {
      throw ParseError(source, line, "duplicate word");
    }
  });
  return lex;
}

inline const ClosedClassLexicon& default_closed_class_lexicon() {
  static const ClosedClassLexicon lex = [] {
    ClosedClassLexicon l;
    const auto add = [&](PosTag tag, std::initializer_list<std::string_view> words) {
      for (auto w : words) l.emplace(std::string(w), tag);
    };
    add(PosTag::DET, {"a", "an", "the", "this", "that", "these", "those", "each", "every", "some",
                      "any", "no", "all", "both", "either", "neither", "another", "such", "what",
                      "which", "whose"});
    add(PosTag::PRON, {"i",       "me",     "my",   "mine",  "myself",     "you",      "your",
                       "yours",   "yourself", "yourselves", "we", "us",    "our",      "ours",
                       "ourselves", "he",   "him",  "his",   "himself",    "she",      "her",
                       "hers",    "herself", "it",  "its",   "itself",     "they",     "them",
                       "their",   "theirs", "themselves", "who", "whom"});
    add(PosTag::PREP, {"about",  "above",   "across", "after",  "against",    "along",  "among",
                       "around", "at",      "before", "behind", "below",      "beneath", "beside",
                       "between", "beyond", "by",     "down",   "during",     "except", "for",
                       "from",   "in",      "inside", "into",   "near",       "of",     "off",
                       "on",     "onto",    "out",    "outside", "over",      "past",   "since",
                       "through", "throughout", "till", "to",   "toward",     "towards", "under",
                       "underneath", "until", "up",   "upon",   "with",       "within", "without"});
    add(PosTag::CONJ, {"and", "but", "or", "nor", "so", "yet", "because", "although", "though",
                       "while", "whereas", "if", "unless", "whether"});
    return l;
  }();
  return lex;
}

/// Ordered rules: closed-class lookup, then suffix rules, then NOUN.
class PosTagger {
 public:
  PosTagger() : lexicon_(default_closed_class_lexicon()) {}
  explicit PosTagger(ClosedClassLexicon lexicon) : lexicon_(std::move(lexicon)) {}

  PosTag tag(std::string_view word) const {
    if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) return it->second;
    const auto has_suffix = [&](std::string_view suffix) {
      return word.size() > suffix.size() && word.ends_with(suffix);
    };
    if (has_suffix("ly")) return PosTag::ADV;
    if (has_suffix("ing") || has_suffix("ed")) return PosTag::VERB;
    if (has_suffix("ous") || has_suffix("ful") || has_suffix("ive") || has_suffix("able")) {
      return PosTag::ADJ;
    }
    if (!word.empty() && word.find_first_not_of("0123456789") == std::string_view::npos) {
      return PosTag::NUM;
    }
    return PosTag::NOUN;
  }

  std::vector<PosTag> tag(const std::vector<std::string>& tokens) const {
    std::vector<PosTag> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(tag(t));
    return out;
  }

 private:
  ClosedClassLexicon lexicon_;
};

inline std::vector<PosTag> pos_tag(const std::vector<std::string>& tokens) {
  return PosTagger{}.tag(tokens);
}

/// Greedy left-to-right maximal matches of DET? ADJ* NOUN+.
inline std::vector<ChunkRange> chunk(const std::vector<PosTag>& tags) {
  std::vector<ChunkRange> out;
  std::size_t i = 0;
  while (i < tags.size()) {
    std::size_t j = i;
    if (tags[j] == PosTag::DET) ++j;
    while (j < tags.size() && tags[j] == PosTag::ADJ) ++j;
    const std::size_t nouns_begin = j;
    while (j < tags.size() && tags[j] == PosTag::NOUN) ++j;
    if (j > nouns_begin) {
      out.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

/// Chunks tagged tokens; untagged tokens never take part in a chunk.
inline std::vector<ChunkRange> chunk(const std::vector<Token>& tagged) {
  std::vector<PosTag> tags;
  tags.reserve(tagged.size());
  for (const auto& t : tagged) tags.push_back(t.pos.value_or(PosTag::OTHER));
  return chunk(tags);
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineConfig {
  bool clean = true;
  bool lowercase = true;
  bool stopwords = true;
  bool stem = true;
  bool pos = false;
  bool chunk = false;
  /// Stoplist file; the bundled list is used when unset.
  std::optional<std::filesystem::path> stopword_list;

  static PipelineConfig all_off() { return {false, false, false, false, false, false, {}}; }

  void validate() const {
    if (stem && !lowercase) throw ValidationError("stemming requires the lowercase stage");
    if (chunk && !pos) throw ValidationError("chunking requires the POS stage");
  }

  bool operator==(const PipelineConfig&) const = default;
};

/// Runs clean -> lowercase -> tokenize -> stopwords -> stem -> pos -> chunk,
/// skipping disabled stages. Holds the loaded stoplist so many documents can
/// share it; immutable after construction.
class Preprocessor {
 public:
  Preprocessor() : Preprocessor(PipelineConfig{}) {}

  explicit Preprocessor(PipelineConfig config)
      : config_(std::move(config)),
        stoplist_(config_.stopword_list ? load_stopwords(*config_.stopword_list)
                                        : default_stopwords()) {
    config_.validate();
  }

  Preprocessor(PipelineConfig config, WordSet stoplist)
      : config_(std::move(config)), stoplist_(std::move(stoplist)) {
    config_.validate();
  }

  const PipelineConfig& config() const noexcept { return config_; }
  const WordSet& stoplist() const noexcept { return stoplist_; }

  TokenizedDocument operator()(std::string_view raw, std::string source_id = {}) const {
    std::string text = config_.clean ? clean_text(raw) : std::string(raw);
    if (config_.lowercase) text = lowercase(text);
    auto surfaces = tokenize(text);
    if (config_.stopwords) surfaces = remove_stopwords(surfaces, stoplist_);

    TokenizedDocument doc;
    doc.source_id = std::move(source_id);
    doc.tokens.reserve(surfaces.size());
    for (auto& s : surfaces) {
      Token t;
      t.stem = config_.stem ? stem(s) : s;
      if (t.stem.empty()) t.stem = s;  // a lone "s" stems to nothing
      t.surface = std::move(s);
      doc.tokens.push_back(std::move(t));
    }
    if (config_.pos) {
      for (auto& t : doc.tokens) t.pos = tagger_.tag(t.surface);
    }
    if (config_.chunk) doc.chunks = chunk(doc.tokens);
    return doc;
  }

 private:
  PipelineConfig config_;
  WordSet stoplist_;
  PosTagger tagger_;
};

inline TokenizedDocument preprocess(std::string_view raw, const PipelineConfig& config) {
  return Preprocessor(config)(raw);
}

}  // namespace tweetsent
