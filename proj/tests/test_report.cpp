#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "tweetsent/report.hpp"

using namespace tweetsent;
using Strings = std::vector<std::string>;

namespace {

Corpus texts(const Strings& ts) {
  std::vector<TweetRecord> records;
  for (std::size_t i = 0; i < ts.size(); ++i) records.push_back({std::to_string(i), {}, ts[i], {}});
  return Corpus(std::move(records));
}

std::size_t count_bars(const std::string& svg) {
  std::size_t n = 0;
  for (auto pos = svg.find("class=\"bar\""); pos != std::string::npos;
       pos = svg.find("class=\"bar\"", pos + 1)) {
    ++n;
  }
  return n;
}

Histogram sample_histogram() {
  return tweet_length_histogram(texts({"short", "a bit longer text", "tiny", "medium sized one"}), 5);
}

}  // namespace

TEST(LengthHistogram, Examples) {
  const auto h = tweet_length_histogram(texts({"12345", "123456789012345"}), 10);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(h.edges, (std::vector<double>{0, 10, 20}));
  const auto one = tweet_length_histogram(texts({"abc", "abcd"}), 10);
  EXPECT_EQ(one.counts, std::vector<std::size_t>{2});
  // Characters, not bytes.
  EXPECT_EQ(tweet_length_histogram(texts({"\xC3\xA9\xC3\xA9"}), 2).counts, std::vector<std::size_t>{1});
  EXPECT_EQ(tweet_length_histogram(texts({"one two three"}), 2, LengthMode::Tokens).edges.back(), 4.0);
  EXPECT_THROW(tweet_length_histogram(texts({"a"}), 0), ValidationError);
  EXPECT_THROW(tweet_length_histogram(Corpus{}, 5), ValidationError);
}

TEST(LengthHistogram, ConservesMass) {
  Strings ts;
  for (int i = 1; i <= 97; ++i) ts.push_back(std::string(static_cast<std::size_t>(i * 3 % 140 + 1), 'x'));
  for (std::size_t w : {1u, 7u, 10u, 200u}) EXPECT_EQ(tweet_length_histogram(texts(ts), w).total(), ts.size());
}

TEST(ScoreDistribution, Examples) {
  const std::vector<double> s{-1.0, 0.0, 1.0};
  EXPECT_EQ(score_distribution(s, 2).counts, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(score_distribution(s, 1).counts, std::vector<std::size_t>{3});
  EXPECT_EQ(score_distribution(std::vector<double>{}, 4).total(), 0u);
  EXPECT_THROW(score_distribution(s, 0), ValidationError);
  EXPECT_EQ(histogram_to_csv(score_distribution(s, 2)), "bin_start,bin_end,count\n-1,0,1\n0,1,2\n");
}

TEST(FrequencyTable, CountsAndOrder) {
  const std::vector<Strings> docs{{"good", "good"}, {"war", "good", "ace"}, {"war"}};
  const auto t = frequency_table(docs);
  using E = std::pair<std::string, std::size_t>;
  EXPECT_EQ(t.entries, (std::vector<E>{{"good", 3}, {"war", 2}, {"ace", 1}}));
  EXPECT_EQ(frequency_table(docs, 1).entries, (std::vector<E>{{"good", 3}}));
  EXPECT_TRUE(frequency_table(std::vector<Strings>{}).entries.empty());
  EXPECT_THROW(frequency_table(docs, 0), ValidationError);
}

TEST(FrequencyTable, PerLabelCsv) {
  std::array<std::vector<Strings>, kNumClasses> groups;
  groups[2] = {{"good", "good"}};
  const auto tables = wordcloud_frequencies(groups);
  EXPECT_TRUE(tables[0].entries.empty());
  EXPECT_EQ(frequencies_to_csv(tables), "label,token,count\npositive,good,2\n");
}

TEST(DailySentiment, MeansPerDay) {
  Corpus c({{"1", parse_timestamp("2022-03-01T10:00:00Z"), "a", {}},
            {"2", parse_timestamp("2022-03-01T18:00:00Z"), "b", {}},
            {"3", parse_timestamp("2022-02-28T12:00:00Z"), "c", {}},
            {"4", std::nullopt, "d", {}}});
  const std::vector<double> scores{0.2, 0.6, -0.5, 1.0};
  const auto d = daily_sentiment(c, scores);
  ASSERT_EQ(d.points.size(), 2u);
  EXPECT_EQ(d.points[0].date, "2022-02-28");
  EXPECT_EQ(d.points[1].date, "2022-03-01");
  EXPECT_NEAR(d.points[1].mean_polarity, 0.4, 1e-12);
  EXPECT_EQ(d.points[1].count, 2u);
  EXPECT_EQ(d.undated, 1u);
  EXPECT_EQ(daily_to_csv(d), "date,mean_polarity,count\n2022-02-28,-0.500000,1\n2022-03-01,0.400000,2\n");
  EXPECT_THROW(daily_sentiment(c, std::vector<double>{0.1}), ValidationError);
}

TEST(DailySentiment, NoTimestampsGivesEmptySeries) {
  const auto d = daily_sentiment(texts({"a", "b"}), std::vector<double>{0.1, 0.2});
  EXPECT_TRUE(d.points.empty());
  EXPECT_EQ(d.undated, 2u);
}

TEST(Svg, DeterministicAndWellFormed) {
  const auto chart = to_chart(sample_histogram(), {"Lengths", "characters", "tweets"});
  const auto a = render_bar_chart(chart);
  EXPECT_EQ(a, render_bar_chart(chart));
  EXPECT_EQ(a.rfind("<?xml", 0), 0u);
  EXPECT_NE(a.find("width=\"800\" height=\"400\""), std::string::npos);
  EXPECT_EQ(count_bars(a), chart.values.size());
  EXPECT_NE(a.find("</svg>"), std::string::npos);
}

TEST(Svg, SingleBinRendersOneBar) {
  const auto h = tweet_length_histogram(texts({"abc"}), 10);
  EXPECT_EQ(count_bars(render_bar_chart(to_chart(h, {"t", "x", "y"}))), 1u);
}

TEST(Svg, EscapesLabels) {
  FrequencyTable t;
  t.entries = {{"<b>&", 2}};
  const auto svg = render_bar_chart(to_chart(t, {"a \"q\"", "x", "y"}));
  EXPECT_NE(svg.find("&lt;b&gt;&amp;"), std::string::npos);
  EXPECT_NE(svg.find("a &quot;q&quot;"), std::string::npos);
  EXPECT_THROW(render_bar_chart(BarChart{}), ValidationError);
}

TEST(Svg, MatchesGoldenFile) {
  const std::filesystem::path golden = std::filesystem::path(TWEETSENT_TEST_DIR) / "golden" / "length_histogram.svg";
  const auto svg = render_bar_chart(to_chart(sample_histogram(), {"Tweet length", "characters", "tweets"}));
  EXPECT_EQ(svg, io::read_file(golden));
}

TEST(Svg, EmitWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "tweetsent_report_emit.svg";
  emit_chart(sample_histogram(), {"Tweet length", "characters", "tweets"}, path);
  EXPECT_EQ(io::read_file(path),
            render_bar_chart(to_chart(sample_histogram(), {"Tweet length", "characters", "tweets"})));
  std::filesystem::remove(path);
}
