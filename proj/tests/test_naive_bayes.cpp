#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tweetsent/naive_bayes.hpp"
#include "tweetsent/random.hpp"

using namespace tweetsent;
using boost::multiprecision::cpp_rational;
using L = SentimentLabel;

namespace {

DocTermMatrix matrix(std::size_t n_terms, std::vector<SparseCounts> rows) {
  return DocTermMatrix{n_terms, std::move(rows)};
}

// P(c | doc) from the smoothed formula in exact arithmetic.
std::array<double, kNumClasses> exact_posterior(const DocTermMatrix& m, const std::vector<L>& labels,
                                                const SparseCounts& doc, long alpha) {
  const std::size_t v = m.n_terms;
  std::array<cpp_rational, kNumClasses> joint;
  cpp_rational total = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    long n_c = 0, tokens = 0;
    std::vector<long> counts(v, 0);
    for (std::size_t d = 0; d < m.n_docs(); ++d) {
      if (index_of(labels[d]) != c) continue;
      ++n_c;
      for (const auto& tc : m.rows[d]) {
        counts[tc.term] += static_cast<long>(tc.count);
        tokens += static_cast<long>(tc.count);
      }
    }
    cpp_rational p(n_c, static_cast<long>(m.n_docs()));
    for (const auto& tc : doc) {
      const cpp_rational lik(counts[tc.term] + alpha, tokens + alpha * static_cast<long>(v));
      for (std::size_t k = 0; k < tc.count; ++k) p *= lik;
    }
    joint[c] = p;
    total += p;
  }
  std::array<double, kNumClasses> out{};
  for (std::size_t c = 0; c < kNumClasses; ++c) out[c] = static_cast<double>(joint[c] / total);
  return out;
}

}  // namespace

TEST(NaiveBayes, HandExample) {
  // vocab {a, b}; doc1 = [a] class 0, doc2 = [b] class 1.
  const auto m = matrix(2, {{{0, 1}}, {{1, 1}}});
  const std::vector<L> labels{L::Negative, L::Neutral};
  const auto model = fit_naive_bayes(m, labels, 1.0);
  EXPECT_NEAR(std::exp(model.log_likelihood(0, 0)), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::exp(model.log_likelihood(1, 0)), 1.0 / 3.0, 1e-15);
  const auto s = predict_log_posterior({{0, 1}}, model);
  const double expected = std::log(0.5 / 0.5) + std::log((2.0 / 3.0) / (1.0 / 3.0));
  EXPECT_NEAR(s[0] - s[1], expected, 1e-12);
  EXPECT_FALSE(model.class_present(2));
  EXPECT_EQ(s[2], -std::numeric_limits<double>::infinity());
}

TEST(NaiveBayes, SingleClassAndEmptyClass) {
  const auto m = matrix(3, {{{0, 2}}, {{1, 1}}});
  const auto model = fit_naive_bayes(m, std::vector<L>{L::Positive, L::Positive});
  EXPECT_DOUBLE_EQ(model.class_log_prior[2], 0.0);
  // Class with no tokens: uniform 1/|V|.
  const auto empty_docs = matrix(3, {{}, {{1, 1}}});
  const auto model2 = fit_naive_bayes(empty_docs, std::vector<L>{L::Negative, L::Positive});
  for (std::size_t w = 0; w < 3; ++w) EXPECT_NEAR(std::exp(model2.log_likelihood(0, w)), 1.0 / 3.0, 1e-15);
}

TEST(NaiveBayes, NormalizationInvariants) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t v = 1 + rng.below(6);
    std::vector<SparseCounts> rows;
    std::vector<L> labels;
    for (std::size_t d = 0; d < 1 + rng.below(10); ++d) {
      SparseCounts row;
      for (std::size_t w = 0; w < v; ++w) {
        if (const auto c = rng.below(3)) row.push_back({w, c});
      }
      rows.push_back(row);
      labels.push_back(label_at(rng.below(3)));
    }
    const auto model = fit_naive_bayes(matrix(v, rows), labels, 0.5 + rng.unit());
    double prior_sum = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      prior_sum += std::exp(model.class_log_prior[c]);
      double lik_sum = 0.0;
      for (std::size_t w = 0; w < v; ++w) {
        EXPECT_TRUE(std::isfinite(model.log_likelihood(c, w)));
        lik_sum += std::exp(model.log_likelihood(c, w));
      }
      EXPECT_NEAR(lik_sum, 1.0, 1e-9);
    }
    EXPECT_NEAR(prior_sum, 1.0, 1e-12);
  }
}

TEST(NaiveBayes, EmptyVectorGivesPriors) {
  const auto model = fit_naive_bayes(matrix(2, {{{0, 1}}, {{1, 1}}, {{1, 3}}}),
                                     std::vector<L>{L::Negative, L::Neutral, L::Positive});
  EXPECT_EQ(predict_log_posterior({}, model), model.class_log_prior);
}

TEST(NaiveBayes, LikelihoodTermIsLinearInCounts) {
  const auto model = fit_naive_bayes(matrix(2, {{{0, 2}}, {{1, 1}}, {{0, 1}, {1, 1}}}),
                                     std::vector<L>{L::Negative, L::Neutral, L::Positive});
  const auto once = predict_log_posterior({{0, 1}, {1, 2}}, model);
  const auto twice = predict_log_posterior({{0, 2}, {1, 4}}, model);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    EXPECT_NEAR(twice[c] - model.class_log_prior[c], 2.0 * (once[c] - model.class_log_prior[c]), 1e-12);
  }
}

TEST(NaiveBayes, ArgmaxTieBreaksLow) {
  EXPECT_EQ(argmax(std::array<double, 3>{-1, -2, -3}), 0u);
  EXPECT_EQ(argmax(std::array<double, 3>{-5, -1, -1}), 1u);
  EXPECT_EQ(argmax(std::array<double, 3>{0, 0, 0}), 0u);
  // Symmetric corpus and document.
  const auto model = fit_naive_bayes(matrix(2, {{{0, 1}}, {{1, 1}}}), std::vector<L>{L::Negative, L::Positive});
  EXPECT_EQ(predict({{0, 1}, {1, 1}}, model), L::Negative);
}

TEST(NaiveBayes, ShiftInvariance) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    std::array<double, 3> s{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double k = rng.uniform(-100, 100);
    auto t = s;
    for (double& x : t) x += k;
    EXPECT_EQ(argmax(s), argmax(t));
  }
}

TEST(NaiveBayes, Errors) {
  const auto m = matrix(2, {{{0, 1}}});
  EXPECT_THROW(fit_naive_bayes(m, std::vector<L>{L::Negative}, 0.0), ValidationError);
  EXPECT_THROW(fit_naive_bayes(m, std::vector<L>{L::Negative}, -1.0), ValidationError);
  EXPECT_THROW(fit_naive_bayes(matrix(2, {}), std::vector<L>{}), ValidationError);
  EXPECT_THROW(fit_naive_bayes(m, std::vector<L>{L::Negative, L::Neutral}), ValidationError);
  const auto model = fit_naive_bayes(m, std::vector<L>{L::Negative});
  EXPECT_THROW(predict_log_posterior({{2, 1}}, model), ValidationError);
}

TEST(NaiveBayes, MatchesExactRationalsOnRandomSmallCorpora) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t v = 1 + rng.below(4);
    const std::size_t n = 1 + rng.below(5);
    std::vector<SparseCounts> rows(n);
    std::vector<L> labels;
    for (auto& row : rows) {
      for (std::size_t w = 0; w < v; ++w) {
        if (const auto c = rng.below(3)) row.push_back({w, c});
      }
      labels.push_back(label_at(rng.below(3)));
    }
    const long alpha = 1 + static_cast<long>(rng.below(2));
    const auto m = matrix(v, rows);
    const auto model = fit_naive_bayes(m, labels, static_cast<double>(alpha));
    SparseCounts doc;
    for (std::size_t w = 0; w < v; ++w) {
      if (const auto c = rng.below(3)) doc.push_back({w, c});
    }
    const auto got = posterior_probabilities(predict_log_posterior(doc, model));
    const auto want = exact_posterior(m, labels, doc, alpha);
    for (std::size_t c = 0; c < kNumClasses; ++c) EXPECT_NEAR(got[c], want[c], 1e-12);
  }
}

TEST(NaiveBayes, JsonRoundTripIsExact) {
  const auto m = matrix(3, {{{0, 1}, {2, 5}}, {{1, 1}}});
  const auto model = fit_naive_bayes(m, std::vector<L>{L::Negative, L::Positive}, 0.37);
  const auto text = nb_to_json(model).dump();
  EXPECT_EQ(nb_from_json(nlohmann::json::parse(text)), model);
  auto j = nb_to_json(model);
  j["classes"][0] = "bad";
  EXPECT_THROW(nb_from_json(j), ValidationError);
  j = nb_to_json(model);
  j["token_log_likelihood"][1] = {0.0};
  EXPECT_THROW(nb_from_json(j), ValidationError);
}
