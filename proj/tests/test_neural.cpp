#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tweetsent/neural.hpp"

using namespace tweetsent;
using L = SentimentLabel;

namespace {

IntSequence seq(std::vector<std::uint32_t> ids, std::size_t true_length) {
  return IntSequence{std::move(ids), true_length};
}

double batch_loss(const NnModel& m, const std::vector<NnExample>& batch) {
  return mean_loss(m, batch);
}

std::vector<NnExample> random_batch(Rng& rng, std::size_t vocab, std::size_t n, std::size_t max_len) {
  std::vector<NnExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = rng.below(max_len + 1);
    std::vector<std::uint32_t> ids(max_len, 0);
    for (std::size_t t = 0; t < len; ++t) ids[t] = static_cast<std::uint32_t>(rng.below(vocab));
    out.push_back({seq(ids, len), label_at(rng.below(3))});
  }
  return out;
}

}  // namespace

TEST(Init, ShapesAndPadRow) {
  const auto m = init_params(3, 5, 1, 1);
  EXPECT_EQ(m.embedding.size(), 5u);
  EXPECT_EQ(m.w1.size(), 1u);
  EXPECT_EQ(m.b1.size(), 1u);
  EXPECT_EQ(m.w2.size(), 3u);
  EXPECT_EQ(m.b2.size(), 3u);
  const auto big = init_params(3, 50, 8, 4);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(big.embedding[j], 0.0);
  for (std::size_t i = 8; i < big.embedding.size(); ++i) EXPECT_LE(std::abs(big.embedding[i]), 0.05);
  const double r1 = std::sqrt(6.0 / 12.0);
  for (double w : big.w1) EXPECT_LE(std::abs(w), r1);
  for (double b : big.b1) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(init_params(3, 50, 8, 4), big);
  EXPECT_NE(init_params(4, 50, 8, 4), big);
  EXPECT_THROW(init_params(0, 0, 1, 1), ValidationError);
  EXPECT_THROW(init_params(0, 3, 0, 1), ValidationError);
}

TEST(Forward, ZeroParametersGiveUniform) {
  const auto m = NnModel::zeros(4, 3, 2);
  const auto p = forward(m, seq({2, 3, 0}, 2));
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Forward, EmptySequenceUsesOnlyBiases) {
  auto m = init_params(1, 4, 3, 2);
  m.b2 = {0.5, -0.25, 1.0};
  const auto p = forward(m, seq({0, 0}, 0));
  const auto expected = softmax({0.5, -0.25, 1.0});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(p[k], expected[k], 1e-15);
}

TEST(Forward, HandComputedSmallModel) {
  NnModel m = NnModel::zeros(3, 2, 2);
  m.embedding = {0, 0, 1.0, -2.0, 0.5, 3.0};
  m.w1 = {1.0, -1.0, 0.5, 2.0};  // rows: pooled dim, cols: hidden
  m.b1 = {0.1, -0.2};
  m.w2 = {1.0, 0.0, -1.0, 0.5, 2.0, 0.25};  // rows: hidden, cols: classes
  m.b2 = {0.0, 0.1, -0.1};
  // ids [1, 2]: pooled = ((1 + 0.5) / 2, (-2 + 3) / 2) = (0.75, 0.5)
  // pre_hidden = (0.75*1 + 0.5*0.5 + 0.1, 0.75*-1 + 0.5*2 - 0.2) = (1.1, 0.05)
  // logits = (1.1*1 + 0.05*0.5, 1.1*0 + 0.05*2 + 0.1, 1.1*-1 + 0.05*0.25 - 0.1)
  const double l0 = 1.1 + 0.025, l1 = 0.1 + 0.1, l2 = -1.1 + 0.0125 - 0.1;
  const double z = std::exp(l0) + std::exp(l1) + std::exp(l2);
  const auto p = forward(m, seq({1, 2, 0}, 2));
  EXPECT_NEAR(p[0], std::exp(l0) / z, 1e-12);
  EXPECT_NEAR(p[1], std::exp(l1) / z, 1e-12);
  EXPECT_NEAR(p[2], std::exp(l2) / z, 1e-12);
}

TEST(Forward, OutOfRangeId) {
  const auto m = init_params(1, 4, 2, 2);
  EXPECT_THROW(forward(m, seq({9}, 1)), ValidationError);
}

TEST(Forward, PadInvarianceAndNormalization) {
  Rng rng(6);
  const auto m = init_params(6, 20, 5, 4);
  for (int i = 0; i < 200; ++i) {
    auto ex = random_batch(rng, 20, 1, 8)[0].input;
    const auto p = forward(m, ex);
    double sum = 0.0;
    for (double x : p) {
      EXPECT_GT(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    ex.ids.push_back(0);
    ex.ids.push_back(0);
    EXPECT_EQ(forward(m, ex), p);
  }
}

TEST(Loss, Values) {
  EXPECT_EQ(loss({0, 1, 0}, L::Neutral), 0.0);
  EXPECT_NEAR(loss({1.0 / 3, 1.0 / 3, 1.0 / 3}, L::Positive), std::log(3.0), 1e-12);
  EXPECT_NEAR(loss({0.5, 0.25, 0.25}, L::Negative), std::log(2.0), 1e-12);
  EXPECT_NEAR(loss({1, 0, 0}, L::Positive), -std::log(1e-12), 1e-9);
}

TEST(Gradients, MatchFiniteDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed + 100);
    auto m = init_params(seed, 10, 4, 3);
    // Wider embeddings so relu units switch on and off across the batch.
    for (double& x : m.embedding) x *= 8.0;
    // Nonzero biases keep empty sequences off the relu kink.
    for (double& b : m.b1) b = rng.uniform(-1.0, 1.0);
    const auto batch = random_batch(rng, 10, 6, 5);
    const auto g = gradients(m, batch);
    const double h = 1e-5;
    auto params = m.blocks();
    const auto grads = g.blocks();
    for (std::size_t b = 0; b < params.size(); ++b) {
      for (std::size_t i = 0; i < params[b]->size(); ++i) {
        if (b == 0 && i < m.dim) {
          EXPECT_EQ((*grads[b])[i], 0.0);
          continue;
        }
        double& x = (*params[b])[i];
        const double saved = x;
        x = saved + h;
        const double up = batch_loss(m, batch);
        x = saved - h;
        const double down = batch_loss(m, batch);
        x = saved;
        const double numeric = (up - down) / (2 * h);
        const double analytic = (*grads[b])[i];
        const double rel = std::abs(numeric - analytic) / std::max(1e-8, std::abs(numeric) + std::abs(analytic));
        EXPECT_LT(rel, 1e-4) << "block " << b << " index " << i << " seed " << seed;
      }
    }
  }
}

TEST(Gradients, OutputBiasVanishesUnderSymmetry) {
  const auto m = NnModel::zeros(4, 2, 2);
  const std::vector<NnExample> batch{{seq({2}, 1), L::Negative}, {seq({2}, 1), L::Neutral},
                                     {seq({2}, 1), L::Positive}};
  const auto g = gradients(m, batch);
  for (double x : g.b2) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Gradients, DuplicatedExampleIsMeanInvariant) {
  const auto m = init_params(5, 6, 3, 3);
  const NnExample ex{seq({2, 3, 0}, 2), L::Positive};
  const std::vector<NnExample> one{ex}, two{ex, ex};
  const auto g1 = gradients(m, one), g2 = gradients(m, two);
  const auto b1 = g1.blocks(), b2 = g2.blocks();
  for (std::size_t b = 0; b < b1.size(); ++b) {
    for (std::size_t i = 0; i < b1[b]->size(); ++i) EXPECT_NEAR((*b1[b])[i], (*b2[b])[i], 1e-15);
  }
  EXPECT_THROW(gradients(m, std::vector<NnExample>{}), ValidationError);
}

TEST(Train, ZeroLearningRateIsFixedPoint) {
  Rng rng(3);
  const auto data = random_batch(rng, 10, 40, 5);
  const auto m = init_params(2, 10, 4, 3);
  TrainConfig c;
  c.learning_rate = 0.0;
  c.epochs = 3;
  const auto r = train(m, data, c);
  EXPECT_EQ(r.model, m);
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[0], r.trace[2]);
}

TEST(Train, SeparableBatchLossStrictlyDecreases) {
  std::vector<NnExample> data;
  for (int i = 0; i < 4; ++i) {
    data.push_back({seq({2, 2, 0}, 2), L::Negative});
    data.push_back({seq({3, 0, 0}, 1), L::Neutral});
    data.push_back({seq({4, 4, 4}, 3), L::Positive});
  }
  TrainConfig c;
  c.validation_fraction = 0.0;
  c.batch_size = data.size();
  c.learning_rate = 0.5;
  c.epochs = 5;
  const auto r = train(init_params(1, 5, 4, 4), data, c);
  for (std::size_t e = 1; e < r.trace.size(); ++e) {
    EXPECT_LT(r.trace[e].train_loss, r.trace[e - 1].train_loss);
  }
  EXPECT_EQ(r.trace.back().val_loss, 0.0);
}

TEST(Train, DeterministicForSeed) {
  Rng rng(4);
  const auto data = random_batch(rng, 12, 60, 6);
  TrainConfig c;
  c.epochs = 3;
  c.seed = 9;
  const auto a = train(init_params(1, 12, 4, 3), data, c);
  const auto b = train(init_params(1, 12, 4, 3), data, c);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(trace_to_csv(a.trace), trace_to_csv(b.trace));
}

TEST(Train, DivergenceIsReported) {
  Rng rng(5);
  const auto data = random_batch(rng, 12, 60, 6);
  TrainConfig c;
  c.learning_rate = 1e300;
  EXPECT_THROW(train(init_params(1, 12, 4, 3), data, c), DivergenceError);
}

TEST(Train, ConfigValidation) {
  const std::vector<NnExample> data{{seq({2}, 1), L::Negative}};
  TrainConfig c;
  c.batch_size = 0;
  EXPECT_THROW(train(init_params(1, 3, 2, 2), data, c), ValidationError);
  c = {};
  c.validation_fraction = 1.0;
  EXPECT_THROW(train(init_params(1, 3, 2, 2), data, c), ValidationError);
  c = {};
  EXPECT_THROW(train(init_params(1, 3, 2, 2), std::vector<NnExample>{}, c), ValidationError);
}

TEST(Evaluate, Accuracy) {
  auto m = NnModel::zeros(4, 2, 2);
  m.b2 = {0.0, 0.0, 1.0};  // always predicts positive
  const std::vector<NnExample> pos{{seq({2}, 1), L::Positive}, {seq({3}, 1), L::Positive}};
  EXPECT_EQ(evaluate(m, pos), 1.0);
  const std::vector<NnExample> mixed{{seq({2}, 1), L::Positive}, {seq({3}, 1), L::Negative},
                                     {seq({2}, 1), L::Neutral}, {seq({3}, 1), L::Positive}};
  EXPECT_EQ(evaluate(m, mixed), 0.5);
}

TEST(Serialization, RoundTripIsExact) {
  const auto m = init_params(8, 7, 3, 2);
  EXPECT_EQ(nn_from_json(nlohmann::json::parse(nn_to_json(m).dump())), m);
  auto j = nn_to_json(m);
  j["b2"] = {1.0};
  EXPECT_THROW(nn_from_json(j), ValidationError);
  j = nn_to_json(m);
  j["version"] = 7;
  EXPECT_THROW(nn_from_json(j), ValidationError);
}
