#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "tweetsent/pipeline.hpp"

using namespace tweetsent;
namespace fs = std::filesystem;

namespace {

const AfinnLexicon& afinn() {
  static const AfinnLexicon lex = load_afinn(std::string(TWEETSENT_DATA_DIR) + "/AFINN-111.txt");
  return lex;
}

WordPools default_pools() { return load_pools(std::string(TWEETSENT_DATA_DIR) + "/pools_default.txt"); }

Corpus labeled_synthetic(std::size_t n, std::uint64_t seed) {
  return label_corpus(generate_synthetic(n, seed, default_pools()), afinn()).corpus;
}

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TWEETSENT_CLI) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("tweetsent_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& file) const { return (path_ / file).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST(Labeling, AttachesLabelsAndScores) {
  const Corpus raw({{"1", {}, "good day", {}}, {"2", {}, "bad day", {}}, {"3", {}, "a day", {}}});
  const auto l = label_corpus(raw, afinn());
  EXPECT_EQ(labels_of(l.corpus),
            (std::vector<SentimentLabel>{SentimentLabel::Positive, SentimentLabel::Negative,
                                         SentimentLabel::Neutral}));
  EXPECT_EQ(l.scores[2].hits, 0u);
  EXPECT_THROW(labels_of(raw), ValidationError);
}

TEST(Preprocessor, JsonRoundTrip) {
  PipelineConfig c;
  c.stem = false;
  c.pos = true;
  const Preprocessor p(c, WordSet{"the", "a"});
  const auto q = preprocessor_from_json(preprocessor_to_json(p));
  EXPECT_EQ(preprocessor_to_json(q), preprocessor_to_json(p));
  EXPECT_EQ(q("The wars are ending", "x").tokens, p("The wars are ending", "x").tokens);
}

TEST(NbClassifier, LearnsSyntheticCorpusAndRoundTrips) {
  const auto train = labeled_synthetic(400, 5);
  const auto test = labeled_synthetic(100, 6);
  const auto nb = NbClassifier::train(train, Preprocessor{});
  const Classifier c = nb;
  EXPECT_GT(evaluate_classifier(c, test).accuracy, 0.8);
  const auto reloaded = NbClassifier::from_json(nlohmann::json::parse(nb.to_json().dump()), "mem");
  for (const auto& r : test) {
    const auto a = nb.predict(r.text), b = reloaded.predict(r.text);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.probabilities, b.probabilities);
  }
}

TEST(NnClassifier, RoundTripAndFingerprintCheck) {
  NnTrainOptions opts;
  opts.dim = 4;
  opts.hidden = 3;
  opts.train.epochs = 2;
  opts.train.seed = 3;
  const auto [nn, trace] = NnClassifier::train(labeled_synthetic(120, 2), Preprocessor{}, opts);
  EXPECT_EQ(trace.size(), 2u);
  const auto j = nlohmann::json::parse(nn.to_json().dump());
  const auto back = NnClassifier::from_json(j, nn.vocabulary());
  EXPECT_EQ(back.model(), nn.model());
  EXPECT_EQ(back.max_len(), nn.max_len());
  const auto other = build_vocabulary(std::span<const std::vector<std::string>>(
                                          std::vector<std::vector<std::string>>{{"x", "y"}}),
                                      10, 1);
  EXPECT_THROW(NnClassifier::from_json(j, other), ValidationError);
}

TEST(Cli, PipelineAndPrediction) {
  TempDir dir("cli_pipeline");
  ASSERT_EQ(run_cli("synth -n 300 --seed 1 -o " + (dir / "raw.csv")).status, 0);
  ASSERT_EQ(run_cli("label --corpus " + (dir / "raw.csv") + " -o " + (dir / "lab.csv")).status, 0);
  const auto split = run_cli("split --corpus " + (dir / "lab.csv") + " --seed 1 --out-train " +
                             (dir / "train.csv") + " --out-test " + (dir / "test.csv"));
  ASSERT_EQ(split.status, 0);
  EXPECT_NE(split.out.find("train 240, test 60"), std::string::npos) << split.out;
  ASSERT_EQ(run_cli("train-nb --train " + (dir / "train.csv") + " --model " + (dir / "nb.json")).status, 0);
  const auto ev = run_cli("evaluate --model " + (dir / "nb.json") + " --test " + (dir / "test.csv") +
                          " --report-csv " + (dir / "r.csv") + " --matrix " + (dir / "m.csv"));
  ASSERT_EQ(ev.status, 0) << ev.out;
  EXPECT_NE(ev.out.find("accuracy"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
  const auto pr = run_cli("predict --model " + (dir / "nb.json") + " --text \"what a good great day\"");
  ASSERT_EQ(pr.status, 0);
  EXPECT_EQ(pr.out.rfind("positive\t", 0), 0u) << pr.out;
  ASSERT_EQ(run_cli("report --corpus " + (dir / "lab.csv") + " --out-dir " + (dir / "rep")).status, 0);
  for (const char* f : {"length_histogram.svg", "score_histogram.csv", "word_frequencies.csv",
                        "words_positive.svg", "daily_sentiment.csv"}) {
    EXPECT_TRUE(fs::exists(dir / ("rep/" + std::string(f)))) << f;
  }
}

TEST(Cli, PositiveOnlyPoolsPredictPositive) {
  TempDir dir("cli_positive");
  io::write_file_atomic(dir / "pools.txt", "[positive]\ngood\ngreat\nhappy\nwin\n");
  ASSERT_EQ(run_cli("synth -n 50 --seed 2 --pools " + (dir / "pools.txt") + " -o " + (dir / "raw.csv")).status, 0);
  ASSERT_EQ(run_cli("label --corpus " + (dir / "raw.csv") + " -o " + (dir / "lab.csv")).status, 0);
  const auto tr = run_cli("train-nb --train " + (dir / "lab.csv") + " --model " + (dir / "nb.json"));
  ASSERT_EQ(tr.status, 0) << tr.out;
  EXPECT_NE(tr.out.find("warning"), std::string::npos) << tr.out;
  const auto pr = run_cli("predict --model " + (dir / "nb.json") + " --text \"good great\"");
  EXPECT_EQ(pr.out.rfind("positive\t", 0), 0u) << pr.out;
}

TEST(Cli, NeuralModelNeedsMatchingTokenizer) {
  TempDir dir("cli_neural");
  ASSERT_EQ(run_cli("synth -n 120 --seed 3 -o " + (dir / "a.csv")).status, 0);
  ASSERT_EQ(run_cli("label --corpus " + (dir / "a.csv") + " -o " + (dir / "la.csv")).status, 0);
  io::write_file_atomic(dir / "b.csv", "id,text,label\n1,alpha beta,positive\n2,gamma,negative\n");
  const std::string common = " --epochs 1 --dim 4 --hidden 2 --seed 1 --val-fraction 0";
  ASSERT_EQ(run_cli("train-nn --train " + (dir / "la.csv") + " --model " + (dir / "a.json") + " --tokenizer " +
                    (dir / "a.tok") + common).status, 0);
  ASSERT_EQ(run_cli("train-nn --train " + (dir / "b.csv") + " --model " + (dir / "b.json") + " --tokenizer " +
                    (dir / "b.tok") + common).status, 0);
  EXPECT_EQ(run_cli("predict --model " + (dir / "a.json") + " --tokenizer " + (dir / "a.tok") + " --text hello").status, 0);
  const auto bad = run_cli("predict --model " + (dir / "a.json") + " --tokenizer " + (dir / "b.tok") + " --text hello");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("tokenizer"), std::string::npos) << bad.out;
  EXPECT_EQ(run_cli("predict --model " + (dir / "a.json") + " --text hello").status, 1);
}

TEST(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run_cli("synth -n 5 -o /tmp/tweetsent_never.csv").status, 1);
  EXPECT_EQ(run_cli("split --corpus /nonexistent.csv --seed 1 --out-train a --out-test b").status, 1);
  EXPECT_EQ(run_cli("bogus").status, 1);
  EXPECT_EQ(run_cli("--help").status, 0);
}
