#pragma once

// Multinomial Naive Bayes over bag-of-words counts with additive smoothing.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetsent/error.hpp"
#include "tweetsent/features.hpp"
#include "tweetsent/label.hpp"

namespace tweetsent {

/// Learned parameters, all in log space. A class that had no training
/// documents gets a prior of -inf and never wins the argmax.
struct NbModel {
  double alpha = 1.0;
  std::size_t vocab_size = 0;
  std::array<double, kNumClasses> class_log_prior{};
  /// Row-major kNumClasses x vocab_size matrix of log P(term | class).
  std::vector<double> token_log_likelihood;

  double log_likelihood(std::size_t cls, std::size_t term) const {
    return token_log_likelihood[cls * vocab_size + term];
  }

  bool class_present(std::size_t cls) const { return std::isfinite(class_log_prior[cls]); }

  bool operator==(const NbModel&) const = default;
};

using LogPosterior = std::array<double, kNumClasses>;

/// P(c) = N_c / N and P(w|c) = (count(w,c) + alpha) / (sum_w' count(w',c) + alpha |V|).
inline NbModel fit_naive_bayes(const DocTermMatrix& matrix, std::span<const SentimentLabel> labels,
                               double alpha = 1.0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be > 0");
  if (matrix.n_docs() == 0) throw ValidationError("empty training set");
  if (labels.size() != matrix.n_docs()) {
    throw ValidationError("label count does not match document count");
  }

  const std::size_t v = matrix.n_terms;
  std::array<std::size_t, kNumClasses> docs_per_class{};
  std::vector<double> counts(kNumClasses * v, 0.0);
  std::array<double, kNumClasses> totals{};
  for (std::size_t d = 0; d < matrix.n_docs(); ++d) {
    const std::size_t c = index_of(labels[d]);
    ++docs_per_class[c];
    for (const auto& tc : matrix.rows[d]) {
      if (tc.term >= v) throw ValidationError("term index out of range");
      counts[c * v + tc.term] += static_cast<double>(tc.count);
      totals[c] += static_cast<double>(tc.count);
    }
  }

  NbModel model;
  model.alpha = alpha;
  model.vocab_size = v;
  model.token_log_likelihood.resize(kNumClasses * v);
  const double n = static_cast<double>(matrix.n_docs());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    model.class_log_prior[c] = docs_per_class[c] == 0
                                   ? -std::numeric_limits<double>::infinity()
                                   : std::log(static_cast<double>(docs_per_class[c]) / n);
    const double log_denominator = std::log(totals[c] + alpha * static_cast<double>(v));
    for (std::size_t w = 0; w < v; ++w) {
      model.token_log_likelihood[c * v + w] = std::log(counts[c * v + w] + alpha) - log_denominator;
    }
  }
  return model;
}

/// Unnormalized log posterior: log P(c) + sum_w count_w log P(w|c).
inline LogPosterior predict_log_posterior(const SparseCounts& vector, const NbModel& model) {
  LogPosterior scores = model.class_log_prior;
  for (const auto& tc : vector) {
    if (tc.term >= model.vocab_size) throw ValidationError("term index out of range");
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (model.class_present(c)) {
        scores[c] += static_cast<double>(tc.count) * model.log_likelihood(c, tc.term);
      }
    }
  }
  return scores;
}

/// Index of the largest score; ties go to the lowest index.
template <std::size_t N>
std::size_t argmax(const std::array<double, N>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < N; ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

inline SentimentLabel predict(const SparseCounts& vector, const NbModel& model) {
  return label_at(argmax(predict_log_posterior(vector, model)));
}

/// Normalized posterior probabilities from log scores.
inline std::array<double, kNumClasses> posterior_probabilities(const LogPosterior& scores) {
  double max = -std::numeric_limits<double>::infinity();
  for (double s : scores) max = std::max(max, s);
  std::array<double, kNumClasses> p{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    p[c] = std::isfinite(scores[c]) ? std::exp(scores[c] - max) : 0.0;
    sum += p[c];
  }
  for (double& x : p) x /= sum;
  return p;
}

// ---------------------------------------------------------------------------
// Serialization. Doubles are written in shortest round-trip form; -inf priors
// are written as null.

inline constexpr int kNbModelVersion = 1;

inline nlohmann::json nb_to_json(const NbModel& model) {
  nlohmann::json priors = nlohmann::json::array();
  for (double p : model.class_log_prior) {
    priors.push_back(std::isfinite(p) ? nlohmann::json(p) : nlohmann::json(nullptr));
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto first = model.token_log_likelihood.begin() + static_cast<std::ptrdiff_t>(c * model.vocab_size);
    rows.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(model.vocab_size)));
  }
  nlohmann::json classes = nlohmann::json::array();
  for (auto l : kAllLabels) classes.push_back(to_string(l));
  return {{"version", kNbModelVersion},
          {"alpha", model.alpha},
          {"vocab_size", model.vocab_size},
          {"classes", classes},
          {"class_log_prior", priors},
          {"token_log_likelihood", rows}};
}

inline NbModel nb_from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != kNbModelVersion) {
    throw ValidationError("unsupported naive bayes model version");
  }
  const auto classes = j.at("classes").get<std::vector<std::string>>();
  if (classes.size() != kNumClasses) throw ValidationError("unexpected class list");
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (classes[c] != to_string(label_at(c))) throw ValidationError("unexpected class order");
  }
  NbModel m;
  m.alpha = j.at("alpha").get<double>();
  m.vocab_size = j.at("vocab_size").get<std::size_t>();
  const auto& priors = j.at("class_log_prior");
  const auto& rows = j.at("token_log_likelihood");
  if (priors.size() != kNumClasses || rows.size() != kNumClasses) {
    throw ValidationError("naive bayes model has wrong class count");
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.class_log_prior[c] =
        priors[c].is_null() ? -std::numeric_limits<double>::infinity() : priors[c].get<double>();
    const auto row = rows[c].get<std::vector<double>>();
    if (row.size() != m.vocab_size) throw ValidationError("likelihood row has wrong length");
    m.token_log_likelihood.insert(m.token_log_likelihood.end(), row.begin(), row.end());
  }
  return m;
}

}  // namespace tweetsent
