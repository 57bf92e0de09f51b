#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetsent/error.hpp"
#include "tweetsent/io.hpp"
#include "tweetsent/textprep.hpp"

namespace tweetsent {

/// Token <-> index table shared by the count and sequence encoders.
///
/// Index 0 is padding and index 1 the out-of-vocabulary marker; real tokens
/// occupy 2, 3, ... in rank order. Count vectors address tokens by their
/// zero-based term column (`index - kFirstIndex`).
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kOov = 1;
  static constexpr std::size_t kFirstIndex = 2;

  Vocabulary() = default;

  Vocabulary(std::vector<std::string> tokens, std::size_t max_size, std::size_t min_df)
      : tokens_(std::move(tokens)), max_size_(max_size), min_df_(min_df) {
    if (tokens_.size() > max_size_) throw ValidationError("vocabulary exceeds max_size");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i].empty()) throw ValidationError("empty vocabulary token");
      if (!term_of_.emplace(tokens_[i], i).second) {
        throw ValidationError("duplicate vocabulary token '" + tokens_[i] + "'");
      }
    }
  }

  /// Number of real tokens (excludes PAD and OOV).
  std::size_t size() const noexcept { return tokens_.size(); }
  /// Number of sequence indices, PAD and OOV included.
  std::size_t index_count() const noexcept { return tokens_.size() + kFirstIndex; }

  std::size_t max_size() const noexcept { return max_size_; }
  std::size_t min_df() const noexcept { return min_df_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  std::optional<std::size_t> term(const std::string& token) const {
    auto it = term_of_.find(token);
    if (it == term_of_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> index(const std::string& token) const {
    auto t = term(token);
    if (!t) return std::nullopt;
    return *t + kFirstIndex;
  }

  std::size_t sequence_id(const std::string& token) const { return index(token).value_or(kOov); }

  /// FNV-1a over the ordered token list, as 16 hex digits. Identifies the
  /// exact index assignment a model was trained against.
  std::string fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mix = [&](unsigned char c) {
      h ^= c;
      h *= 0x100000001b3ULL;
    };
    for (const auto& t : tokens_) {
      for (unsigned char c : t) mix(c);
      mix(0);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && max_size_ == other.max_size_ && min_df_ == other.min_df_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> term_of_;
  std::size_t max_size_ = 0;
  std::size_t min_df_ = 1;
};

/// Ranks tokens by total frequency (descending, ties lexicographic), drops
/// those appearing in fewer than `min_df` documents and keeps `max_size`.
inline Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs,
                                   std::size_t max_size, std::size_t min_df = 1) {
  if (max_size < 1) throw ValidationError("max_size must be >= 1");
  if (docs.empty()) throw ValidationError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // (tf, df)
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> in_doc;
    for (const auto& tok : doc) {
      auto& s = stats[tok];
      ++s.first;
      if (in_doc.insert(tok).second) ++s.second;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, s] : stats) {
    if (s.second >= min_df) ranked.emplace_back(tok, s.first);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& r : ranked) tokens.push_back(std::move(r.first));
  return Vocabulary(std::move(tokens), max_size, min_df);
}

/// Builds over the stems of preprocessed documents.
inline Vocabulary build_vocabulary(std::span<const TokenizedDocument> docs, std::size_t max_size,
                                   std::size_t min_df = 1) {
  std::vector<std::vector<std::string>> stems;
  stems.reserve(docs.size());
  for (const auto& d : docs) stems.push_back(d.stems());
  return build_vocabulary(std::span<const std::vector<std::string>>(stems), max_size, min_df);
}

// ---------------------------------------------------------------------------
// Bag of words

struct TermCount {
  std::size_t term = 0;  // zero-based column, see Vocabulary
  std::size_t count = 0;

  bool operator==(const TermCount&) const = default;
};

/// Sparse count vector sorted by term, counts > 0.
using SparseCounts = std::vector<TermCount>;

inline SparseCounts vectorize_counts(const std::vector<std::string>& tokens,
                                     const Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& t : tokens) {
    if (auto term = vocab.term(t)) ++counts[*term];
  }
  SparseCounts out;
  out.reserve(counts.size());
  for (auto [term, count] : counts) out.push_back({term, count});
  return out;
}

inline SparseCounts vectorize_counts(const TokenizedDocument& doc, const Vocabulary& vocab) {
  return vectorize_counts(doc.stems(), vocab);
}

struct DocTermMatrix {
  std::size_t n_terms = 0;
  std::vector<SparseCounts> rows;

  std::size_t n_docs() const noexcept { return rows.size(); }
};

inline DocTermMatrix vectorize_corpus(std::span<const TokenizedDocument> docs,
                                      const Vocabulary& vocab) {
  DocTermMatrix m;
  m.n_terms = vocab.size();
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(vectorize_counts(d, vocab));
  return m;
}

// ---------------------------------------------------------------------------
// Integer sequences

struct IntSequence {
  std::vector<std::uint32_t> ids;  // fixed length, PAD after true_length
  std::size_t true_length = 0;

  bool operator==(const IntSequence&) const = default;
};

/// Maps tokens to indices (OOV -> 1), keeps the first `max_len` and pads the
/// tail with 0.
inline IntSequence encode_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                                   std::size_t max_len) {
  if (max_len < 1) throw ValidationError("max_len must be >= 1");
  IntSequence seq;
  seq.ids.assign(max_len, static_cast<std::uint32_t>(Vocabulary::kPad));
  seq.true_length = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < seq.true_length; ++i) {
    seq.ids[i] = static_cast<std::uint32_t>(vocab.sequence_id(tokens[i]));
  }
  return seq;
}

inline IntSequence encode_sequence(const TokenizedDocument& doc, const Vocabulary& vocab,
                                   std::size_t max_len) {
  return encode_sequence(doc.stems(), vocab, max_len);
}

/// 95th percentile (nearest rank) of document lengths, at least 1.
inline std::size_t default_max_len(std::vector<std::size_t> lengths) {
  if (lengths.empty()) return 1;
  std::sort(lengths.begin(), lengths.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(lengths.size())));
  return std::max<std::size_t>(1, lengths[std::max<std::size_t>(rank, 1) - 1]);
}

// ---------------------------------------------------------------------------
// Tokenizer persistence
//
// {
//   "format": "tweetsent-tokenizer",
//   "version": 1,
//   "max_size": <int>, "min_df": <int>,
//   "pad_index": 0, "oov_index": 1,
//   "tokens": ["<index 2>", "<index 3>", ...]
// }

inline constexpr int kTokenizerVersion = 1;
inline constexpr std::string_view kTokenizerFormat = "tweetsent-tokenizer";

inline nlohmann::json tokenizer_to_json(const Vocabulary& vocab) {
  return {{"format", kTokenizerFormat},
          {"version", kTokenizerVersion},
          {"max_size", vocab.max_size()},
          {"min_df", vocab.min_df()},
          {"pad_index", Vocabulary::kPad},
          {"oov_index", Vocabulary::kOov},
          {"tokens", vocab.tokens()}};
}

inline Vocabulary tokenizer_from_json(const nlohmann::json& j, const std::string& source) {
  try {
    if (j.at("format").get<std::string>() != kTokenizerFormat) {
      throw ParseError(source, 0, "not a tokenizer file");
    }
    const int version = j.at("version").get<int>();
    if (version != kTokenizerVersion) {
      throw ParseError(source, 0, "unsupported tokenizer version " + std::to_string(version));
    }
    if (j.at("pad_index").get<std::size_t>() != Vocabulary::kPad ||
        j.at("oov_index").get<std::size_t>() != Vocabulary::kOov) {
      throw ParseError(source, 0, "unexpected reserved indices");
    }
    return Vocabulary(j.at("tokens").get<std::vector<std::string>>(),
                      j.at("max_size").get<std::size_t>(), j.at("min_df").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, std::string("invalid tokenizer: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(source, 0, e.what());
  }
}

inline void save_tokenizer(const Vocabulary& vocab, const std::filesystem::path& path) {
  io::write_file_atomic(path, tokenizer_to_json(vocab).dump(2) + "\n");
}

inline Vocabulary load_tokenizer(const std::filesystem::path& path) {
  const auto text = io::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return tokenizer_from_json(j, path.string());
}

}  // namespace tweetsent
