#pragma once

// Feedforward text classifier:
//   embedding -> masked mean pool -> dense(relu) -> dense -> softmax
// trained with mini-batch gradient descent on mean cross-entropy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetsent/error.hpp"
#include "tweetsent/features.hpp"
#include "tweetsent/label.hpp"
#include "tweetsent/naive_bayes.hpp"
#include "tweetsent/random.hpp"

namespace tweetsent {

using Probabilities = std::array<double, kNumClasses>;

/// Parameter set. Also used as the gradient container, with identical shapes.
struct NnModel {
  std::size_t vocab_size = 0;  // embedding rows, PAD and OOV included
  std::size_t dim = 0;         // d
  std::size_t hidden = 0;      // h
  std::vector<double> embedding;  // vocab_size x dim, row 0 (PAD) stays zero
  std::vector<double> w1;         // dim x hidden
  std::vector<double> b1;         // hidden
  std::vector<double> w2;         // hidden x kNumClasses
  std::vector<double> b2;         // kNumClasses

  static NnModel zeros(std::size_t vocab_size, std::size_t dim, std::size_t hidden) {
    NnModel m;
    m.vocab_size = vocab_size;
    m.dim = dim;
    m.hidden = hidden;
    m.embedding.assign(vocab_size * dim, 0.0);
    m.w1.assign(dim * hidden, 0.0);
    m.b1.assign(hidden, 0.0);
    m.w2.assign(hidden * kNumClasses, 0.0);
    m.b2.assign(kNumClasses, 0.0);
    return m;
  }

  /// Every parameter block, in a fixed order, for generic loops.
  std::array<std::vector<double>*, 5> blocks() { return {&embedding, &w1, &b1, &w2, &b2}; }
  std::array<const std::vector<double>*, 5> blocks() const {
    return {&embedding, &w1, &b1, &w2, &b2};
  }

  bool all_finite() const {
    for (const auto* b : blocks()) {
      for (double x : *b) {
        if (!std::isfinite(x)) return false;
      }
    }
    return true;
  }

  bool operator==(const NnModel&) const = default;
};

struct NnExample {
  IntSequence input;
  SentimentLabel label = SentimentLabel::Neutral;
};

/// Embedding rows ~ U(-0.05, 0.05) except PAD, dense weights Glorot-uniform,
/// biases zero.
inline NnModel init_params(std::uint64_t seed, std::size_t vocab_size, std::size_t dim,
                           std::size_t hidden) {
  if (vocab_size < 1 || dim < 1 || hidden < 1) {
    throw ValidationError("network dimensions must be >= 1");
  }
  NnModel m = NnModel::zeros(vocab_size, dim, hidden);
  Rng rng(seed);
  for (std::size_t i = dim; i < m.embedding.size(); ++i) m.embedding[i] = rng.uniform(-0.05, 0.05);
  const double r1 = std::sqrt(6.0 / static_cast<double>(dim + hidden));
  for (double& w : m.w1) w = rng.uniform(-r1, r1);
  const double r2 = std::sqrt(6.0 / static_cast<double>(hidden + kNumClasses));
  for (double& w : m.w2) w = rng.uniform(-r2, r2);
  return m;
}

/// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardCache {
  std::vector<double> pooled;      // dim
  std::vector<double> pre_hidden;  // hidden, before relu
  std::vector<double> activation;  // hidden, after relu
  Probabilities probs{};
};

inline Probabilities softmax(const std::array<double, kNumClasses>& logits) {
  const double max = *std::max_element(logits.begin(), logits.end());
  Probabilities p{};
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    p[k] = std::exp(logits[k] - max);
    sum += p[k];
  }
  for (double& x : p) x /= sum;
  return p;
}

inline ForwardCache forward_cached(const NnModel& m, const IntSequence& seq) {
  if (seq.true_length > seq.ids.size()) throw ValidationError("true_length exceeds sequence");
  ForwardCache c;
  c.pooled.assign(m.dim, 0.0);
  for (std::size_t t = 0; t < seq.true_length; ++t) {
    const std::size_t id = seq.ids[t];
    if (id >= m.vocab_size) throw ValidationError("token id " + std::to_string(id) + " out of range");
    const double* row = &m.embedding[id * m.dim];
    for (std::size_t j = 0; j < m.dim; ++j) c.pooled[j] += row[j];
  }
  if (seq.true_length > 0) {
    const double inv = 1.0 / static_cast<double>(seq.true_length);
    for (double& x : c.pooled) x *= inv;
  }
  c.pre_hidden = m.b1;
  for (std::size_t j = 0; j < m.dim; ++j) {
    const double p = c.pooled[j];
    const double* w = &m.w1[j * m.hidden];
    for (std::size_t k = 0; k < m.hidden; ++k) c.pre_hidden[k] += p * w[k];
  }
  c.activation.resize(m.hidden);
  for (std::size_t k = 0; k < m.hidden; ++k) c.activation[k] = std::max(0.0, c.pre_hidden[k]);
  std::array<double, kNumClasses> logits{};
  for (std::size_t o = 0; o < kNumClasses; ++o) logits[o] = m.b2[o];
  for (std::size_t k = 0; k < m.hidden; ++k) {
    const double a = c.activation[k];
    for (std::size_t o = 0; o < kNumClasses; ++o) logits[o] += a * m.w2[k * kNumClasses + o];
  }
  c.probs = softmax(logits);
  return c;
}

inline Probabilities forward(const NnModel& m, const IntSequence& seq) {
  return forward_cached(m, seq).probs;
}

/// Cross-entropy, -log p[label] with p clamped at 1e-12.
inline double loss(const Probabilities& probs, SentimentLabel label) {
  return -std::log(std::max(probs[index_of(label)], 1e-12));
}

/// Exact gradients of the mean batch loss. The PAD row gradient is zero.
inline NnModel gradients(const NnModel& m, std::span<const NnExample> batch) {
  if (batch.empty()) throw ValidationError("gradient batch is empty");
  NnModel g = NnModel::zeros(m.vocab_size, m.dim, m.hidden);
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<double> d_hidden(m.hidden);
  std::vector<double> d_pooled(m.dim);
  for (const auto& ex : batch) {
    const auto c = forward_cached(m, ex.input);
    std::array<double, kNumClasses> d_logits{};
    for (std::size_t o = 0; o < kNumClasses; ++o) {
      d_logits[o] = (c.probs[o] - (o == index_of(ex.label) ? 1.0 : 0.0)) * scale;
      g.b2[o] += d_logits[o];
    }
    for (std::size_t k = 0; k < m.hidden; ++k) {
      double acc = 0.0;
      for (std::size_t o = 0; o < kNumClasses; ++o) {
        g.w2[k * kNumClasses + o] += c.activation[k] * d_logits[o];
        acc += m.w2[k * kNumClasses + o] * d_logits[o];
      }
      d_hidden[k] = c.pre_hidden[k] > 0.0 ? acc : 0.0;
      g.b1[k] += d_hidden[k];
    }
    for (std::size_t j = 0; j < m.dim; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m.hidden; ++k) {
        g.w1[j * m.hidden + k] += c.pooled[j] * d_hidden[k];
        acc += m.w1[j * m.hidden + k] * d_hidden[k];
      }
      d_pooled[j] = acc;
    }
    if (ex.input.true_length == 0) continue;
    const double inv = 1.0 / static_cast<double>(ex.input.true_length);
    for (std::size_t t = 0; t < ex.input.true_length; ++t) {
      const std::size_t id = ex.input.ids[t];
      if (id == Vocabulary::kPad) continue;
      double* row = &g.embedding[id * m.dim];
      for (std::size_t j = 0; j < m.dim; ++j) row[j] += d_pooled[j] * inv;
    }
  }
  return g;
}

inline SentimentLabel predict(const NnModel& m, const IntSequence& seq) {
  return label_at(argmax(forward(m, seq)));
}

/// Fraction of examples whose argmax prediction matches the label.
inline double evaluate(const NnModel& m, std::span<const NnExample> data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : data) correct += predict(m, ex.input) == ex.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

inline double mean_loss(const NnModel& m, std::span<const NnExample> data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : data) total += loss(forward(m, ex.input), ex.label);
  return total / static_cast<double>(data.size());
}

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
  std::size_t epochs = 10;
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;

  void validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
      throw ValidationError("learning_rate must be a finite value >= 0");
    }
    if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
      throw ValidationError("validation_fraction must be in [0, 1)");
    }
  }
};

/// Full-pass metrics measured after each epoch. Validation values are 0 when
/// no validation split was requested.
struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;

  bool operator==(const EpochStats&) const = default;
};

using EpochTrace = std::vector<EpochStats>;

struct TrainResult {
  NnModel model;
  EpochTrace trace;
};

/// Carves floor(n * validation_fraction) examples off for validation, then runs
/// `epochs` passes of shuffled mini-batch SGD over the rest. Throws
/// DivergenceError if a loss becomes non-finite.
inline TrainResult train(NnModel model, std::span<const NnExample> data, const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw ValidationError("training data is empty");

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(derive_seed(config.seed, 1));
  split_rng.shuffle(std::span<std::size_t>(order));
  const auto n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(data.size()) * config.validation_fraction + 1e-9));
  if (n_val >= data.size()) throw ValidationError("validation split leaves no training data");
  std::vector<NnExample> val, fit;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_val ? val : fit).push_back(data[order[i]]);
  }

  Rng shuffle_rng(derive_seed(config.seed, 2));
  std::vector<std::size_t> batch_order(fit.size());
  for (std::size_t i = 0; i < batch_order.size(); ++i) batch_order[i] = i;
  std::vector<NnExample> batch;
  batch.reserve(config.batch_size);

  TrainResult result{std::move(model), {}};
  NnModel& m = result.model;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(batch_order));
    for (std::size_t start = 0; start < fit.size(); start += config.batch_size) {
      batch.clear();
      const std::size_t stop = std::min(fit.size(), start + config.batch_size);
      for (std::size_t i = start; i < stop; ++i) batch.push_back(fit[batch_order[i]]);
      const NnModel g = gradients(m, batch);
      auto params = m.blocks();
      const auto grads = g.blocks();
      for (std::size_t b = 0; b < params.size(); ++b) {
        auto& p = *params[b];
        const auto& d = *grads[b];
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= config.learning_rate * d[i];
      }
    }
    EpochStats stats{mean_loss(m, fit), mean_loss(m, val), evaluate(m, fit), evaluate(m, val)};
    if (!std::isfinite(stats.train_loss) || !std::isfinite(stats.val_loss) || !m.all_finite()) {
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1));
    }
    result.trace.push_back(stats);
  }
  return result;
}

inline std::string trace_to_csv(const EpochTrace& trace) {
  std::string out = "epoch,train_loss,val_loss,train_acc,val_acc\n";
  char buf[160];
  for (std::size_t e = 0; e < trace.size(); ++e) {
    const auto& s = trace[e];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", e + 1, s.train_loss, s.val_loss,
                  s.train_accuracy, s.val_accuracy);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline constexpr int kNnModelVersion = 1;

inline nlohmann::json nn_to_json(const NnModel& m) {
  return {{"version", kNnModelVersion}, {"vocab_size", m.vocab_size}, {"dim", m.dim},
          {"hidden", m.hidden},         {"embedding", m.embedding},   {"w1", m.w1},
          {"b1", m.b1},                 {"w2", m.w2},                 {"b2", m.b2}};
}

inline NnModel nn_from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != kNnModelVersion) {
    throw ValidationError("unsupported neural model version");
  }
  NnModel m;
  m.vocab_size = j.at("vocab_size").get<std::size_t>();
  m.dim = j.at("dim").get<std::size_t>();
  m.hidden = j.at("hidden").get<std::size_t>();
  m.embedding = j.at("embedding").get<std::vector<double>>();
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<std::vector<double>>();
  if (m.embedding.size() != m.vocab_size * m.dim || m.w1.size() != m.dim * m.hidden ||
      m.b1.size() != m.hidden || m.w2.size() != m.hidden * kNumClasses ||
      m.b2.size() != kNumClasses) {
    throw ValidationError("neural model parameter shapes do not match its dimensions");
  }
  return m;
}

}  // namespace tweetsent
