#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
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
#include "tweetsent/label.hpp"
#include "tweetsent/random.hpp"
#include "tweetsent/textprep.hpp"

namespace tweetsent {

using Timestamp = std::chrono::sys_seconds;

// ---------------------------------------------------------------------------
// Timestamps

namespace corpus_detail {

inline bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += count;
  out = v;
  return true;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace corpus_detail

/// ISO-8601 date-time (`YYYY-MM-DD[T| ]HH:MM[:SS[.fff]][Z|+HH:MM|+HHMM]`) with a
/// date-only fallback. Times without an offset are taken as UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  namespace d = corpus_detail;
  const std::string_view s = d::trim(text);
  std::size_t pos = 0;
  int y = 0, mo = 0, dd = 0;
  if (!d::read_digits(s, pos, 4, y) || pos >= s.size() || s[pos++] != '-' ||
      !d::read_digits(s, pos, 2, mo) || pos >= s.size() || s[pos++] != '-' ||
      !d::read_digits(s, pos, 2, dd)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(dd)}};
  if (!ymd.ok()) return std::nullopt;
  sys_seconds t = sys_days{ymd};
  if (pos == s.size()) return t;
  if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
  ++pos;
  int hh = 0, mm = 0, ss = 0;
  if (!d::read_digits(s, pos, 2, hh) || pos >= s.size() || s[pos++] != ':' ||
      !d::read_digits(s, pos, 2, mm)) {
    return std::nullopt;
  }
  if (pos < s.size() && s[pos] == ':') {
    ++pos;
    if (!d::read_digits(s, pos, 2, ss)) return std::nullopt;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  t += hours{hh} + minutes{mm} + seconds{ss};
  if (pos == s.size()) return t;
  if (s[pos] == 'Z' && pos + 1 == s.size()) return t;
  if (s[pos] != '+' && s[pos] != '-') return std::nullopt;
  const int sign = s[pos++] == '+' ? 1 : -1;
  int oh = 0, om = 0;
  if (!d::read_digits(s, pos, 2, oh)) return std::nullopt;
  if (pos < s.size() && s[pos] == ':') ++pos;
  if (pos < s.size() && !d::read_digits(s, pos, 2, om)) return std::nullopt;
  if (pos != s.size() || oh > 23 || om > 59) return std::nullopt;
  return t - sign * (hours{oh} + minutes{om});
}

/// `YYYY-MM-DDTHH:MM:SSZ`.
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

/// `YYYY-MM-DD` of the UTC calendar day.
inline std::string format_date(Timestamp t) { return format_timestamp(t).substr(0, 10); }

// ---------------------------------------------------------------------------
// Records

struct TweetRecord {
  std::string id;
  std::optional<Timestamp> timestamp;
  std::string text;
  std::optional<SentimentLabel> label;

  bool operator==(const TweetRecord&) const = default;
};

/// Ordered, immutable set of tweets with unique ids and non-blank texts.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<TweetRecord> records) : records_(std::move(records)) {
    std::unordered_set<std::string_view> ids;
    for (const auto& r : records_) {
      if (corpus_detail::trim(r.text).empty()) {
        throw ValidationError("record '" + r.id + "' has empty text");
      }
      if (!ids.insert(r.id).second) throw ValidationError("duplicate record id '" + r.id + "'");
    }
  }

  const std::vector<TweetRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const TweetRecord& operator[](std::size_t i) const { return records_[i]; }
  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<TweetRecord> records_;
};

// ---------------------------------------------------------------------------
// CSV ingestion

/// Header names for each field. Only the text column is required; the others
/// are used when present in the header.
struct ColumnMapping {
  std::string text = "text";
  std::string id = "id";
  std::string date = "date";
  std::string label = "label";
};

struct CsvLoadOptions {
  ColumnMapping mapping;
  bool strict = false;  // first malformed row aborts instead of being skipped
};

struct CsvLoadResult {
  Corpus corpus;
  std::size_t skipped = 0;
};

inline CsvLoadResult parse_corpus_csv(std::string_view text, const std::string& source,
                                      const CsvLoadOptions& options = {}) {
  io::CsvReader reader(text);
  if (reader.done()) throw ParseError(source, 1, "missing header row");
  auto head = reader.next();
  if (head.error) throw ParseError(source, head.row.line, *head.error);
  const auto& header = head.row.fields;
  const auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (corpus_detail::trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto text_col = find(options.mapping.text);
  if (!text_col) throw ValidationError(source + ": missing column '" + options.mapping.text + "'");
  const auto id_col = find(options.mapping.id);
  const auto date_col = find(options.mapping.date);
  const auto label_col = find(options.mapping.label);

  std::vector<TweetRecord> records;
  std::unordered_set<std::string> ids;
  std::size_t skipped = 0;
  std::size_t row_index = 0;
  while (!reader.done()) {
    auto rec = reader.next();
    auto& fields = rec.row.fields;
    if (!rec.error && fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++row_index;
    std::optional<std::string> problem = rec.error;
    TweetRecord r;
    if (!problem && fields.size() != header.size()) {
      problem = "expected " + std::to_string(header.size()) + " fields, found " +
                std::to_string(fields.size());
    }
    if (!problem) {
      r.text = fields[*text_col];
      if (corpus_detail::trim(r.text).empty()) problem = "empty text";
    }
    if (!problem) {
      r.id = id_col ? std::string(corpus_detail::trim(fields[*id_col])) : std::to_string(row_index);
      if (r.id.empty()) {
        problem = "empty id";
      } else if (ids.contains(r.id)) {
        problem = "duplicate id '" + r.id + "'";
      }
    }
    if (!problem && date_col) r.timestamp = parse_timestamp(fields[*date_col]);
    if (!problem && label_col) {
      const auto raw = corpus_detail::trim(fields[*label_col]);
      if (!raw.empty()) {
        r.label = parse_label(raw);
        if (!r.label) problem = "unknown label '" + std::string(raw) + "'";
      }
    }
    if (problem) {
      if (options.strict) throw ParseError(source, rec.row.line, *problem);
      ++skipped;
      continue;
    }
    ids.insert(r.id);
    records.push_back(std::move(r));
  }
  return {Corpus(std::move(records)), skipped};
}

inline CsvLoadResult load_csv(const std::filesystem::path& path,
                              const CsvLoadOptions& options = {}) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  return parse_corpus_csv(io::read_file(path), path.string(), options);
}

inline std::string format_polarity(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// `id,date,text,label` (plus `polarity` when scores are given). Missing
/// timestamps and labels are written as empty fields.
inline std::string corpus_to_csv(const Corpus& corpus, const std::vector<double>* polarity = nullptr) {
  if (polarity && polarity->size() != corpus.size()) {
    throw ValidationError("polarity column length does not match corpus");
  }
  std::string out;
  std::vector<std::string> header{"id", "date", "text", "label"};
  if (polarity) header.emplace_back("polarity");
  io::append_csv_row(out, header);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& r = corpus[i];
    std::vector<std::string> row{r.id, r.timestamp ? format_timestamp(*r.timestamp) : "", r.text,
                                 r.label ? std::string(to_string(*r.label)) : ""};
    if (polarity) row.push_back(format_polarity((*polarity)[i]));
    io::append_csv_row(out, row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relevance filter

namespace corpus_detail {

inline std::string normalize_whitespace(std::string_view text) {
  std::string out;
  for (const auto& tok : tokenize(text)) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

inline bool is_link_or_mention(std::string_view tok) {
  const auto lower = lowercase(tok);
  return lower.starts_with("http://") || lower.starts_with("https://") ||
         lower.starts_with("www.") || (tok.size() > 1 && tok.front() == '@');
}

}  // namespace corpus_detail

/// Drops records that are URL/mention-only, empty after cleaning, or duplicates
/// (whitespace-normalized exact text) of an earlier record.
inline Corpus filter_relevant(const Corpus& corpus) {
  std::vector<TweetRecord> kept;
  std::unordered_set<std::string> seen;
  for (const auto& r : corpus) {
    const auto words = tokenize(r.text);
    if (std::all_of(words.begin(), words.end(), corpus_detail::is_link_or_mention)) continue;
    if (clean_text(r.text).empty()) continue;
    if (!seen.insert(corpus_detail::normalize_whitespace(r.text)).second) continue;
    kept.push_back(r);
  }
  return Corpus(std::move(kept));
}

// ---------------------------------------------------------------------------
// Train/test split

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = false;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw ValidationError("train_fraction must be in (0, 1)");
    }
  }
};

/// floor(n * fraction), tolerant of representation error such as
/// 0.7 * 10 = 6.9999999999999991.
inline std::size_t train_size(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

/// Seeded shuffle, first floor(n * f) records go to train. Stratified mode
/// splits each class separately and hands the leftover slots to the classes
/// with the largest fractional share. Both sides keep load order.
inline std::pair<Corpus, Corpus> train_test_split(const Corpus& corpus, const SplitConfig& config) {
  config.validate();
  if (corpus.empty()) throw ValidationError("cannot split an empty corpus");
  const std::size_t n = corpus.size();
  const std::size_t n_train = train_size(n, config.train_fraction);
  Rng rng(config.seed);
  std::vector<bool> in_train(n, false);

  if (!config.stratified) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;
  } else {
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < n; ++i) {
      if (!corpus[i].label) {
        throw ValidationError("stratified split requires a label on every record ('" +
                              corpus[i].id + "')");
      }
      by_class[index_of(*corpus[i].label)].push_back(i);
    }
    std::array<std::size_t, kNumClasses> quota{};
    std::array<double, kNumClasses> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double exact = static_cast<double>(by_class[c].size()) * config.train_fraction;
      quota[c] = train_size(by_class[c].size(), config.train_fraction);
      remainder[c] = exact - static_cast<double>(quota[c]);
      assigned += quota[c];
    }
    std::array<std::size_t, kNumClasses> rank{0, 1, 2};
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < n_train && k < kNumClasses; ++k) {
      const std::size_t c = rank[k];
      if (quota[c] < by_class[c].size()) {
        ++quota[c];
        ++assigned;
      }
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      rng.shuffle(std::span<std::size_t>(by_class[c]));
      for (std::size_t i = 0; i < quota[c]; ++i) in_train[by_class[c][i]] = true;
    }
  }

  std::vector<TweetRecord> train, test;
  train.reserve(n_train);
  test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? train : test).push_back(corpus[i]);
  return {Corpus(std::move(train)), Corpus(std::move(test))};
}

// ---------------------------------------------------------------------------
// Synthetic corpora

/// Word lists for the generator. Positive and negative words are expected to
/// carry lexicon valence; neutral and filler words none.
struct WordPools {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> neutral;
  std::vector<std::string> filler;
};

/// Sections `[positive]`, `[negative]`, `[neutral]`, `[filler]`, one word per
/// line, `#` comments. A word may appear in only one section.
inline WordPools parse_pools(std::string_view text, const std::string& source) {
  WordPools pools;
  std::vector<std::string>* current = nullptr;
  std::unordered_set<std::string> seen;
  io::for_each_entry(text, [&](std::size_t line, std::string_view entry) {
    const auto word = corpus_detail::trim(entry);
    if (word.front() == '[') {
      if (word == "[positive]") current = &pools.positive;
      else if (word == "[negative]") current = &pools.negative;
      else if (word == "[neutral]") current = &pools.neutral;
      else if (word == "[filler]") current = &pools.filler;
      else throw ParseError(source, line, "unknown section " + std::string(word));
      return;
    }
    if (!current) throw ParseError(source, line, "word outside of a section");
    if (word.find_first_of(" \t") != std::string_view::npos) {
      throw ParseError(source, line, "expected a single word");
    }
    if (!seen.emplace(word).second) {
      throw ParseError(source, line, "word '" + std::string(word) + "' appears twice");
    }
    current->emplace_back(word);
  });
  return pools;
}

inline WordPools load_pools(const std::filesystem::path& path) {
  return parse_pools(io::read_file(path), path.string());
}

namespace corpus_detail {

inline const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[static_cast<std::size_t>(rng.below(pool.size()))];
}

inline std::string random_alnum(Rng& rng, std::size_t len) {
  static constexpr std::string_view kChars =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kChars[rng.below(kChars.size())]);
  return s;
}

}  // namespace corpus_detail

/// Generates `n` unlabeled tweet-like records.
///
/// Each record draws a tone (negative 45%, positive 35%, neutral 20%,
/// renormalized over non-empty pools), 2-4 words of that tone, occasionally
/// one word of the opposite tone, and neutral/filler words up to a length of
/// 4-14. Mentions, links, hashtags, numbers, capitals and punctuation are
/// sprinkled in so the cleaning stage has work to do. Dates fall in the 180
/// days from 2022-02-24.
inline Corpus generate_synthetic(std::size_t n, std::uint64_t seed, const WordPools& pools) {
  namespace d = corpus_detail;
  using namespace std::chrono;
  if (n == 0) throw ValidationError("synthetic corpus size must be > 0");
  if (pools.positive.empty() && pools.negative.empty() && pools.neutral.empty()) {
    throw ValidationError("word pools are empty");
  }

  enum Tone { kNegative, kNeutral, kPositive };
  const std::array<const std::vector<std::string>*, 3> tone_pool{&pools.negative, &pools.neutral,
                                                                 &pools.positive};
  std::array<double, 3> weight{0.45, 0.20, 0.35};
  double total = 0.0;
  for (int t = 0; t < 3; ++t) {
    if (tone_pool[t]->empty()) weight[t] = 0.0;
    total += weight[t];
  }

  const sys_seconds base = sys_days{year{2022} / February / 24};
  Rng rng(seed);
  std::vector<TweetRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.unit() * total;
    int tone = 0;
    for (; tone < 2; ++tone) {
      if (u < weight[tone]) break;
      u -= weight[tone];
    }
    while (weight[tone] == 0.0) --tone;

    std::vector<std::string> words;
    const std::size_t length = static_cast<std::size_t>(rng.between(4, 14));
    if (tone == kNeutral) {
      words.push_back(d::pick(rng, pools.neutral));
    } else {
      const auto k = static_cast<std::size_t>(rng.between(2, 4));
      for (std::size_t j = 0; j < k; ++j) words.push_back(d::pick(rng, *tone_pool[tone]));
      const auto& opposite = *tone_pool[tone == kPositive ? kNegative : kPositive];
      if (!opposite.empty() && rng.chance(0.1)) words.push_back(d::pick(rng, opposite));
    }
    while (words.size() < length) {
      const bool want_neutral = rng.chance(0.5);
      if (!pools.neutral.empty() && (want_neutral || pools.filler.empty())) {
        words.push_back(d::pick(rng, pools.neutral));
      } else if (!pools.filler.empty()) {
        words.push_back(d::pick(rng, pools.filler));
      } else {
        words.push_back(d::pick(rng, *tone_pool[tone]));
      }
    }
    rng.shuffle(std::span<std::string>(words));

    if (rng.chance(0.3)) {
      auto& w = words[rng.below(words.size())];
      w.insert(w.begin(), '#');
    }
    if (rng.chance(0.2)) {
      auto& w = words.front();
      if (w.front() >= 'a' && w.front() <= 'z') w.front() = static_cast<char>(w.front() - 'a' + 'A');
    }
    if (rng.chance(0.1)) {
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)),
                   std::to_string(rng.between(1, 2023)));
    }
    std::string text;
    if (rng.chance(0.3)) text = "@user" + std::to_string(rng.between(1, 999)) + " ";
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (j) text += (j % 5 == 0 && rng.chance(0.3)) ? ", " : " ";
      text += words[j];
    }
    static constexpr std::array<std::string_view, 5> kEndings{"", ".", "!", "!!!", "?"};
    text += kEndings[rng.below(kEndings.size())];
    if (rng.chance(0.25)) text += " https://t.co/" + d::random_alnum(rng, 10);

    TweetRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i + 1);
    r.id = id;
    r.timestamp = base + days{rng.below(180)} + seconds{rng.below(86400)};
    r.text = std::move(text);
    records.push_back(std::move(r));
  }
  return Corpus(std::move(records));
}

}  // namespace tweetsent
