#pragma once

// End-to-end glue: lexicon labeling, trainable text classifiers that carry
// their preprocessing settings, and self-describing model files.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetsent/corpus.hpp"
#include "tweetsent/features.hpp"
#include "tweetsent/lexicon.hpp"
#include "tweetsent/metrics.hpp"
#include "tweetsent/naive_bayes.hpp"
#include "tweetsent/neural.hpp"
#include "tweetsent/textprep.hpp"

namespace tweetsent {

// ---------------------------------------------------------------------------
// Labeling

struct LabeledCorpus {
  Corpus corpus;                       // every record carries a label
  std::vector<PolarityScore> scores;   // aligned to corpus
};

inline LabeledCorpus label_corpus(const Corpus& corpus, const AfinnLexicon& lexicon,
                                  double epsilon = 0.0) {
  std::vector<TweetRecord> records;
  std::vector<PolarityScore> scores;
  records.reserve(corpus.size());
  scores.reserve(corpus.size());
  for (const auto& r : corpus) {
    auto score = score_text(r.text, lexicon);
    TweetRecord labeled = r;
    labeled.label = label_from_score(score, epsilon);
    records.push_back(std::move(labeled));
    scores.push_back(score);
  }
  return {Corpus(std::move(records)), std::move(scores)};
}

inline std::vector<SentimentLabel> labels_of(const Corpus& corpus) {
  std::vector<SentimentLabel> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus) {
    if (!r.label) throw ValidationError("record '" + r.id + "' has no label");
    out.push_back(*r.label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing settings persisted with each model

inline nlohmann::json preprocessor_to_json(const Preprocessor& p) {
  const auto& c = p.config();
  std::vector<std::string> stop(p.stoplist().begin(), p.stoplist().end());
  std::sort(stop.begin(), stop.end());
  return {{"clean", c.clean},         {"lowercase", c.lowercase}, {"stopwords", c.stopwords},
          {"stem", c.stem},           {"pos", c.pos},             {"chunk", c.chunk},
          {"stopword_list", stop}};
}

inline Preprocessor preprocessor_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  c.clean = j.at("clean").get<bool>();
  c.lowercase = j.at("lowercase").get<bool>();
  c.stopwords = j.at("stopwords").get<bool>();
  c.stem = j.at("stem").get<bool>();
  c.pos = j.at("pos").get<bool>();
  c.chunk = j.at("chunk").get<bool>();
  WordSet stop;
  for (auto& w : j.at("stopword_list").get<std::vector<std::string>>()) stop.insert(std::move(w));
  return Preprocessor(c, std::move(stop));
}

inline std::vector<TokenizedDocument> preprocess_corpus(const Corpus& corpus,
                                                        const Preprocessor& prep) {
  std::vector<TokenizedDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& r : corpus) docs.push_back(prep(r.text, r.id));
  return docs;
}

struct Prediction {
  SentimentLabel label = SentimentLabel::Neutral;
  std::array<double, kNumClasses> probabilities{};

  double confidence() const { return probabilities[index_of(label)]; }
};

inline constexpr std::string_view kModelFormat = "tweetsent-model";
inline constexpr int kModelFileVersion = 1;

// ---------------------------------------------------------------------------
// Naive Bayes

struct NbTrainOptions {
  double alpha = 1.0;
  std::size_t max_vocab = 10000;
  std::size_t min_df = 1;
};

class NbClassifier {
 public:
  NbClassifier(Preprocessor prep, Vocabulary vocab, NbModel model)
      : prep_(std::move(prep)), vocab_(std::move(vocab)), model_(std::move(model)) {
    if (model_.vocab_size != vocab_.size()) {
      throw ValidationError("model and vocabulary sizes differ");
    }
  }

  static NbClassifier train(const Corpus& labeled, Preprocessor prep,
                            const NbTrainOptions& options = {}) {
    const auto labels = labels_of(labeled);
    const auto docs = preprocess_corpus(labeled, prep);
    auto vocab = build_vocabulary(std::span<const TokenizedDocument>(docs), options.max_vocab,
                                  options.min_df);
    const auto matrix = vectorize_corpus(docs, vocab);
    auto model = fit_naive_bayes(matrix, labels, options.alpha);
    return NbClassifier(std::move(prep), std::move(vocab), std::move(model));
  }

  Prediction predict(std::string_view text) const {
    const auto counts = vectorize_counts(prep_(text), vocab_);
    const auto scores = predict_log_posterior(counts, model_);
    return {label_at(argmax(scores)), posterior_probabilities(scores)};
  }

  const Preprocessor& preprocessor() const noexcept { return prep_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const NbModel& model() const noexcept { return model_; }

  nlohmann::json to_json() const {
    return {{"format", kModelFormat},     {"kind", "naive_bayes"},
            {"version", kModelFileVersion}, {"pipeline", preprocessor_to_json(prep_)},
            {"tokenizer", tokenizer_to_json(vocab_)}, {"model", nb_to_json(model_)}};
  }

  static NbClassifier from_json(const nlohmann::json& j, const std::string& source) {
    return NbClassifier(preprocessor_from_json(j.at("pipeline")),
                        tokenizer_from_json(j.at("tokenizer"), source), nb_from_json(j.at("model")));
  }

 private:
  Preprocessor prep_;
  Vocabulary vocab_;
  NbModel model_;
};

// ---------------------------------------------------------------------------
// Neural network

struct NnTrainOptions {
  std::size_t dim = 32;
  std::size_t hidden = 16;
  std::size_t max_vocab = 10000;
  std::size_t min_df = 1;
  std::optional<std::size_t> max_len;  // default: 95th percentile of lengths
  TrainConfig train;
};

/// Network plus what it needs to encode raw text. The vocabulary itself is
/// persisted separately as the tokenizer file; the model file records the
/// tokenizer's fingerprint so a mismatched pair is rejected.
class NnClassifier {
 public:
  NnClassifier(Preprocessor prep, Vocabulary vocab, std::size_t max_len, NnModel model)
      : prep_(std::move(prep)), vocab_(std::move(vocab)), max_len_(max_len), model_(std::move(model)) {
    if (model_.vocab_size != vocab_.index_count()) {
      throw ValidationError("network embedding rows do not match the tokenizer");
    }
    if (max_len_ < 1) throw ValidationError("max_len must be >= 1");
  }

  static std::pair<NnClassifier, EpochTrace> train(const Corpus& labeled, Preprocessor prep,
                                                   const NnTrainOptions& options) {
    const auto labels = labels_of(labeled);
    const auto docs = preprocess_corpus(labeled, prep);
    auto vocab = build_vocabulary(std::span<const TokenizedDocument>(docs), options.max_vocab,
                                  options.min_df);
    std::size_t max_len = 0;
    if (options.max_len) {
      max_len = *options.max_len;
    } else {
      std::vector<std::size_t> lengths;
      for (const auto& d : docs) lengths.push_back(d.tokens.size());
      max_len = default_max_len(std::move(lengths));
    }
    std::vector<NnExample> data;
    data.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      data.push_back({encode_sequence(docs[i], vocab, max_len), labels[i]});
    }
    auto init = init_params(options.train.seed, vocab.index_count(), options.dim, options.hidden);
    auto result = tweetsent::train(std::move(init), data, options.train);
    return {NnClassifier(std::move(prep), std::move(vocab), max_len, std::move(result.model)),
            std::move(result.trace)};
  }

  Prediction predict(std::string_view text) const {
    const auto probs = forward(model_, encode_sequence(prep_(text), vocab_, max_len_));
    return {label_at(argmax(probs)), probs};
  }

  const Preprocessor& preprocessor() const noexcept { return prep_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const NnModel& model() const noexcept { return model_; }
  std::size_t max_len() const noexcept { return max_len_; }

  nlohmann::json to_json() const {
    return {{"format", kModelFormat},
            {"kind", "neural"},
            {"version", kModelFileVersion},
            {"pipeline", preprocessor_to_json(prep_)},
            {"max_len", max_len_},
            {"tokenizer_version", kTokenizerVersion},
            {"tokenizer_fingerprint", vocab_.fingerprint()},
            {"model", nn_to_json(model_)}};
  }

  static NnClassifier from_json(const nlohmann::json& j, Vocabulary tokenizer) {
    if (j.at("tokenizer_version").get<int>() != kTokenizerVersion) {
      throw ValidationError("model expects tokenizer version " +
                            std::to_string(j.at("tokenizer_version").get<int>()));
    }
    if (j.at("tokenizer_fingerprint").get<std::string>() != tokenizer.fingerprint()) {
      throw ValidationError("tokenizer does not match the one this model was trained with");
    }
    return NnClassifier(preprocessor_from_json(j.at("pipeline")), std::move(tokenizer),
                        j.at("max_len").get<std::size_t>(), nn_from_json(j.at("model")));
  }

 private:
  Preprocessor prep_;
  Vocabulary vocab_;
  std::size_t max_len_;
  NnModel model_;
};

// ---------------------------------------------------------------------------
// Model files

using Classifier = std::variant<NbClassifier, NnClassifier>;

inline std::string model_file_contents(const nlohmann::json& j) { return j.dump(1) + "\n"; }

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  const auto text = io::read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

/// Loads either model kind. Neural models need their tokenizer file.
inline Classifier load_classifier(const std::filesystem::path& model_path,
                                  const std::optional<std::filesystem::path>& tokenizer_path) {
  const auto j = read_json_file(model_path);
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw ValidationError(model_path.string() + ": not a model file");
    }
    if (j.at("version").get<int>() != kModelFileVersion) {
      throw ValidationError(model_path.string() + ": unsupported model file version");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "naive_bayes") return NbClassifier::from_json(j, model_path.string());
    if (kind == "neural") {
      if (!tokenizer_path) throw ValidationError("neural models require --tokenizer");
      return NnClassifier::from_json(j, load_tokenizer(*tokenizer_path));
    }
    throw ValidationError(model_path.string() + ": unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(model_path.string(), 0, e.what());
  }
}

inline Prediction predict(const Classifier& c, std::string_view text) {
  return std::visit([&](const auto& m) { return m.predict(text); }, c);
}

inline EvaluationReport evaluate_classifier(const Classifier& c, const Corpus& labeled) {
  const auto truth = labels_of(labeled);
  std::vector<SentimentLabel> predicted;
  predicted.reserve(labeled.size());
  for (const auto& r : labeled) predicted.push_back(predict(c, r.text).label);
  return classification_report(confusion(truth, predicted));
}

}  // namespace tweetsent
