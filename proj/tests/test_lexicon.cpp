#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "tweetsent/lexicon.hpp"
#include "tweetsent/random.hpp"

using namespace tweetsent;
using Strings = std::vector<std::string>;

namespace {

const AfinnLexicon& afinn() {
  static const AfinnLexicon lex = load_afinn(std::string(TWEETSENT_DATA_DIR) + "/AFINN-111.txt");
  return lex;
}

}  // namespace

TEST(Afinn, BundledFileLoads) {
  EXPECT_EQ(afinn().size(), 2477u);
  ASSERT_NE(afinn().find("good"), nullptr);
  EXPECT_EQ(*afinn().find("good"), 3);
  ASSERT_NE(afinn().find("abandon"), nullptr);
  EXPECT_EQ(*afinn().find("abandon"), -2);
  EXPECT_EQ(afinn().find("zzzz"), nullptr);
  for (const auto& [word, score] : afinn().entries()) {
    EXPECT_GE(score, -5);
    EXPECT_LE(score, 5);
  }
}

TEST(Afinn, ParseErrorsCarryLineNumbers) {
  try {
    parse_afinn("good\t3\nbad\tx\n", "mem");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_afinn("good\t3\ngood\t2\n", "mem"), ParseError);
  EXPECT_THROW(parse_afinn("wild\t6\n", "mem"), ParseError);
  EXPECT_THROW(parse_afinn("nospace\n", "mem"), ParseError);
  EXPECT_THROW(parse_afinn("Good\t3\n", "mem"), ParseError);
}

TEST(Afinn, MultiWordEntriesSplitAtLastTab) {
  const auto lex = parse_afinn("does not work\t-3\r\n\nok\t1\n", "mem");
  EXPECT_EQ(lex.size(), 2u);
  ASSERT_NE(lex.find("does not work"), nullptr);
  EXPECT_EQ(*lex.find("does not work"), -3);
}

TEST(Afinn, MissingFileIsIoError) {
  EXPECT_THROW(load_afinn("/nonexistent/afinn.txt"), IoError);
}

TEST(ScoreDocument, Examples) {
  EXPECT_EQ(score_document({"good"}, afinn()), (PolarityScore{0.6, 1}));
  EXPECT_EQ(score_document({}, afinn()), (PolarityScore{0.0, 0}));
  EXPECT_EQ(score_document({"good", "bad"}, afinn()), (PolarityScore{0.0, 2}));
  EXPECT_EQ(score_document({"good", "war", "unknownword"}, afinn()).hits, 2u);
}

TEST(ScoreText, CleansBeforeLookup) {
  const auto s = score_text("@someone GOOD!!! http://x.co", afinn());
  EXPECT_DOUBLE_EQ(s.value, 0.6);
  EXPECT_EQ(s.hits, 1u);
  // Stopwords are kept for scoring ("no" carries valence).
  EXPECT_EQ(score_text("no", afinn()).hits, 1u);
}

TEST(LabelFromScore, Examples) {
  EXPECT_EQ(label_from_score({0.6, 1}), SentimentLabel::Positive);
  EXPECT_EQ(label_from_score({0.0, 0}), SentimentLabel::Neutral);
  EXPECT_EQ(label_from_score({-0.05, 1}, 0.1), SentimentLabel::Neutral);
  EXPECT_EQ(label_from_score({-0.2, 1}, 0.1), SentimentLabel::Negative);
  EXPECT_THROW(label_from_score({0.0, 0}, -0.1), ValidationError);
}

TEST(ScoreDocument, Properties) {
  Strings words;
  for (const auto& [w, s] : afinn().entries()) {
    if (w.find(' ') == std::string::npos) words.push_back(w);
  }
  std::sort(words.begin(), words.end());
  AfinnLexicon negated;
  for (const auto& [w, s] : afinn().entries()) negated.add(w, -s);
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    Strings doc;
    for (std::uint64_t j = 0; j < rng.below(15); ++j) {
      doc.push_back(rng.chance(0.5) ? words[rng.below(words.size())] : "filler");
    }
    const auto s = score_document(doc, afinn());
    EXPECT_LE(std::abs(s.value), 1.0);
    if (s.hits == 0) {
      EXPECT_EQ(s.value, 0.0);
    }
    // Negating every score negates the value.
    EXPECT_EQ(score_document(doc, negated).value, -s.value);
    // Appending a positive word never lowers the raw sum.
    auto more = doc;
    more.push_back("good");
    const auto t = score_document(more, afinn());
    EXPECT_GE(t.value * 5.0 * static_cast<double>(t.hits) + 1e-9,
              s.value * 5.0 * static_cast<double>(s.hits));
  }
}
