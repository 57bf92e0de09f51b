// tweetsent: synthesize, label, split, train, evaluate, predict and report.
//
// Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tweetsent/tweetsent.hpp"

namespace fs = std::filesystem;
using namespace tweetsent;

namespace {

#ifndef TWEETSENT_DATA_DIR
#define TWEETSENT_DATA_DIR "data"
#endif

const std::string kDataDir = TWEETSENT_DATA_DIR;

struct PipelineFlags {
  bool no_clean = false;
  bool no_lowercase = false;
  bool no_stopwords = false;
  bool no_stem = false;
  bool stem = false;
  bool pos = false;
  bool chunk = false;
  std::string stopwords;
};

// Stemming is on by default for training and off for reports, so only the
// relevant switch is registered.
void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f, bool stem_default) {
  cmd->add_flag("--no-clean", f.no_clean, "Skip URL/mention/punctuation cleaning");
  cmd->add_flag("--no-lowercase", f.no_lowercase, "Keep original case");
  cmd->add_flag("--no-stopwords", f.no_stopwords, "Keep stopwords");
  if (stem_default) {
    cmd->add_flag("--no-stem", f.no_stem, "Skip Porter stemming");
  } else {
    cmd->add_flag("--stem", f.stem, "Apply Porter stemming");
  }
  cmd->add_flag("--pos", f.pos, "Tag parts of speech");
  cmd->add_flag("--chunk", f.chunk, "Chunk noun phrases (needs --pos)");
  cmd->add_option("--stopwords", f.stopwords, "Stopword list, one word per line")
      ->check(CLI::ExistingFile);
}

Preprocessor make_preprocessor(const PipelineFlags& f, bool stem_default) {
  PipelineConfig c;
  c.clean = !f.no_clean;
  c.lowercase = !f.no_lowercase;
  c.stopwords = !f.no_stopwords;
  c.stem = stem_default ? !f.no_stem : f.stem;
  c.pos = f.pos;
  c.chunk = f.chunk;
  if (!f.stopwords.empty()) c.stopword_list = f.stopwords;
  return Preprocessor(c);
}

Corpus read_corpus(const std::string& path) {
  auto result = load_csv(path);
  if (result.skipped > 0) {
    std::cerr << "warning: " << path << ": skipped " << result.skipped << " malformed row(s)\n";
  }
  return std::move(result.corpus);
}

/// id -> value of a numeric column, for files that carry per-record scores.
std::map<std::string, double> read_score_column(const std::string& path, const std::string& column) {
  const auto table = io::parse_csv_table(io::read_file(path), path);
  const auto id_col = table.column("id");
  const auto value_col = table.column(column);
  if (!id_col || !value_col) {
    throw ValidationError(path + ": needs 'id' and '" + column + "' columns");
  }
  std::map<std::string, double> out;
  for (const auto& row : table.rows) {
    const auto& raw = row.fields[*value_col];
    if (raw.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      out[row.fields[*id_col]] = v;
    } catch (const std::logic_error&) {
      throw ParseError(path, row.line, "bad " + column + " value '" + raw + "'");
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  io::write_file_atomic(p, content);
}

void warn_absent_classes(const NbModel& model) {
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!model.class_present(c)) {
      std::cerr << "warning: class '" << to_string(label_at(c))
                << "' has no training documents and will never be predicted\n";
    }
  }
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tweet sentiment toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");

  // synth
  std::size_t synth_n = 0;
  std::uint64_t synth_seed = 0;
  std::string synth_pools = kDataDir + "/pools_default.txt";
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic unlabeled corpus");
  synth->add_option("-n,--count", synth_n, "Number of tweets")->required()->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Random seed")->required();
  synth->add_option("--pools", synth_pools, "Word pool file")->check(CLI::ExistingFile)->capture_default_str();
  synth->add_option("-o,--out", synth_out, "Output CSV")->required();

  // label
  std::string label_corpus_path, label_out;
  std::string label_lexicon = kDataDir + "/AFINN-111.txt";
  double label_epsilon = 0.0;
  bool label_filter = false;
  auto* label = app.add_subcommand("label", "Attach lexicon labels and polarity scores");
  label->add_option("--corpus", label_corpus_path, "Input CSV")->required()->check(CLI::ExistingFile);
  label->add_option("--lexicon", label_lexicon, "AFINN lexicon")->check(CLI::ExistingFile)->capture_default_str();
  label->add_option("--epsilon", label_epsilon, "Neutral band half-width")->check(CLI::NonNegativeNumber);
  label->add_flag("--filter", label_filter, "Drop link-only, empty and duplicate tweets first");
  label->add_option("-o,--out", label_out, "Output CSV")->required();

  // split
  std::string split_corpus, split_train, split_test;
  double split_fraction = 0.8;
  std::uint64_t split_seed = 0;
  bool split_stratified = false;
  auto* split = app.add_subcommand("split", "Shuffle and split a corpus into train and test");
  split->add_option("--corpus", split_corpus, "Input CSV")->required()->check(CLI::ExistingFile);
  split->add_option("--fraction", split_fraction, "Training fraction")->check(CLI::Range(0.0, 1.0));
  split->add_option("--seed", split_seed, "Random seed")->required();
  split->add_flag("--stratified", split_stratified, "Preserve label proportions");
  split->add_option("--out-train", split_train, "Training CSV")->required();
  split->add_option("--out-test", split_test, "Test CSV")->required();

  // train-nb
  std::string nb_train, nb_model;
  NbTrainOptions nb_opts;
  PipelineFlags nb_flags;
  auto* train_nb = app.add_subcommand("train-nb", "Train a multinomial Naive Bayes model");
  train_nb->add_option("--train", nb_train, "Labeled training CSV")->required()->check(CLI::ExistingFile);
  train_nb->add_option("--model", nb_model, "Model output (JSON)")->required();
  train_nb->add_option("--alpha", nb_opts.alpha, "Additive smoothing")->check(CLI::PositiveNumber);
  train_nb->add_option("--max-vocab", nb_opts.max_vocab, "Vocabulary cap")->check(CLI::PositiveNumber);
  train_nb->add_option("--min-df", nb_opts.min_df, "Minimum document frequency");
  add_pipeline_flags(train_nb, nb_flags, true);

  // train-nn
  std::string nn_train, nn_model, nn_tokenizer, nn_trace;
  NnTrainOptions nn_opts;
  std::size_t nn_max_len = 0;
  PipelineFlags nn_flags;
  auto* train_nn = app.add_subcommand("train-nn", "Train the feedforward neural classifier");
  train_nn->add_option("--train", nn_train, "Labeled training CSV")->required()->check(CLI::ExistingFile);
  train_nn->add_option("--model", nn_model, "Model output (JSON)")->required();
  train_nn->add_option("--tokenizer", nn_tokenizer, "Tokenizer output (JSON)")->required();
  train_nn->add_option("--trace", nn_trace, "Per-epoch loss/accuracy CSV");
  train_nn->add_option("--seed", nn_opts.train.seed, "Random seed")->required();
  train_nn->add_option("--epochs", nn_opts.train.epochs, "Training epochs");
  train_nn->add_option("--lr", nn_opts.train.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  train_nn->add_option("--batch", nn_opts.train.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  train_nn->add_option("--val-fraction", nn_opts.train.validation_fraction, "Held-out validation fraction");
  train_nn->add_option("--dim", nn_opts.dim, "Embedding width")->check(CLI::PositiveNumber);
  train_nn->add_option("--hidden", nn_opts.hidden, "Hidden units")->check(CLI::PositiveNumber);
  train_nn->add_option("--max-vocab", nn_opts.max_vocab, "Vocabulary cap")->check(CLI::PositiveNumber);
  train_nn->add_option("--min-df", nn_opts.min_df, "Minimum document frequency");
  train_nn->add_option("--max-len", nn_max_len, "Sequence length (default: 95th percentile)");
  add_pipeline_flags(train_nn, nn_flags, true);

  // evaluate
  std::string ev_model, ev_tokenizer, ev_test, ev_report, ev_csv, ev_matrix;
  auto* evaluate = app.add_subcommand("evaluate", "Score a model on a labeled test CSV");
  evaluate->add_option("--model", ev_model, "Model file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--tokenizer", ev_tokenizer, "Tokenizer file (neural models)")->check(CLI::ExistingFile);
  evaluate->add_option("--test", ev_test, "Labeled test CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--report", ev_report, "Write the text report here too");
  evaluate->add_option("--report-csv", ev_csv, "Per-class metrics CSV");
  evaluate->add_option("--matrix", ev_matrix, "Confusion matrix CSV");

  // predict
  std::string pr_model, pr_tokenizer, pr_text, pr_file;
  auto* predict_cmd = app.add_subcommand("predict", "Label a text or each line of a file");
  predict_cmd->add_option("--model", pr_model, "Model file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--tokenizer", pr_tokenizer, "Tokenizer file (neural models)")->check(CLI::ExistingFile);
  auto* text_opt = predict_cmd->add_option("--text", pr_text, "Text to classify");
  auto* file_opt = predict_cmd->add_option("--file", pr_file, "File with one text per line")->check(CLI::ExistingFile);
  text_opt->excludes(file_opt);
  predict_cmd->require_option(1, 3);

  // report
  std::string rp_corpus, rp_scores, rp_out;
  std::string rp_score_column = "polarity";
  std::size_t rp_bin_width = 10, rp_score_bins = 20, rp_top_k = 25;
  std::string rp_length_mode = "chars";
  PipelineFlags rp_flags;
  auto* report = app.add_subcommand("report", "Write descriptive histograms, word tables and charts");
  report->add_option("--corpus", rp_corpus, "Labeled CSV")->required()->check(CLI::ExistingFile);
  report->add_option("--scores", rp_scores, "CSV with id and score columns (default: the corpus)")
      ->check(CLI::ExistingFile);
  report->add_option("--score-column", rp_score_column, "Score column name")->capture_default_str();
  report->add_option("--out-dir", rp_out, "Output directory")->required();
  report->add_option("--bin-width", rp_bin_width, "Tweet-length bin width")->check(CLI::PositiveNumber);
  report->add_option("--length-mode", rp_length_mode, "Measure length in chars or tokens")
      ->check(CLI::IsMember({"chars", "tokens"}));
  report->add_option("--score-bins", rp_score_bins, "Score histogram bins")->check(CLI::PositiveNumber);
  report->add_option("--top-k", rp_top_k, "Words per label table")->check(CLI::PositiveNumber);
  add_pipeline_flags(report, rp_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) {
      const auto corpus = generate_synthetic(synth_n, synth_seed, load_pools(synth_pools));
      write_output(synth_out, corpus_to_csv(corpus));
    } else if (*label) {
      auto corpus = read_corpus(label_corpus_path);
      if (label_filter) {
        const auto before = corpus.size();
        corpus = filter_relevant(corpus);
        std::cerr << "filtered " << before - corpus.size() << " record(s)\n";
      }
      const auto labeled = label_corpus(corpus, load_afinn(label_lexicon), label_epsilon);
      std::vector<double> polarity;
      for (const auto& s : labeled.scores) polarity.push_back(s.value);
      write_output(label_out, corpus_to_csv(labeled.corpus, &polarity));
    } else if (*split) {
      const auto corpus = read_corpus(split_corpus);
      const auto [train, test] =
          train_test_split(corpus, SplitConfig{split_fraction, split_seed, split_stratified});
      const auto table = io::parse_csv_table(io::read_file(split_corpus), split_corpus);
      // Carry the polarity column through when the input has one.
      const auto emit = [&](const Corpus& part, const std::string& path) {
        if (!table.column("polarity")) return write_output(path, corpus_to_csv(part));
        const auto scores = read_score_column(split_corpus, "polarity");
        std::vector<double> polarity;
        for (const auto& r : part) {
          const auto it = scores.find(r.id);
          if (it == scores.end()) throw ValidationError("record '" + r.id + "' has no polarity");
          polarity.push_back(it->second);
        }
        write_output(path, corpus_to_csv(part, &polarity));
      };
      emit(train, split_train);
      emit(test, split_test);
      std::cout << "train " << train.size() << ", test " << test.size() << "\n";
    } else if (*train_nb) {
      const auto corpus = read_corpus(nb_train);
      const auto clf = NbClassifier::train(corpus, make_preprocessor(nb_flags, true), nb_opts);
      warn_absent_classes(clf.model());
      write_output(nb_model, model_file_contents(clf.to_json()));
      std::cout << "vocabulary " << clf.vocabulary().size() << " terms, " << corpus.size()
                << " documents\n";
    } else if (*train_nn) {
      const auto corpus = read_corpus(nn_train);
      if (nn_max_len > 0) nn_opts.max_len = nn_max_len;
      const auto [clf, trace] = NnClassifier::train(corpus, make_preprocessor(nn_flags, true), nn_opts);
      write_output(nn_tokenizer, tokenizer_to_json(clf.vocabulary()).dump(2) + "\n");
      write_output(nn_model, model_file_contents(clf.to_json()));
      if (!nn_trace.empty()) write_output(nn_trace, trace_to_csv(trace));
      for (std::size_t e = 0; e < trace.size(); ++e) {
        std::printf("epoch %zu  train_loss %.4f  val_loss %.4f  train_acc %.4f  val_acc %.4f\n",
                    e + 1, trace[e].train_loss, trace[e].val_loss, trace[e].train_accuracy,
                    trace[e].val_accuracy);
      }
    } else if (*evaluate) {
      const auto clf = load_classifier(ev_model, optional_path(ev_tokenizer));
      const auto report_data = evaluate_classifier(clf, read_corpus(ev_test));
      const auto text = format_report(report_data);
      std::cout << text;
      if (!ev_report.empty()) write_output(ev_report, text);
      if (!ev_csv.empty()) write_output(ev_csv, report_to_csv(report_data));
      if (!ev_matrix.empty()) write_output(ev_matrix, matrix_to_csv(report_data.matrix));
    } else if (*predict_cmd) {
      const auto clf = load_classifier(pr_model, optional_path(pr_tokenizer));
      const auto emit = [&](std::string_view text) {
        const auto p = predict(clf, text);
        std::printf("%s\t%.6f\n", std::string(to_string(p.label)).c_str(), p.confidence());
      };
      if (!pr_file.empty()) {
        const auto content = io::read_file(pr_file);
        std::size_t pos = 0;
        while (pos < content.size()) {
          auto end = content.find('\n', pos);
          if (end == std::string::npos) end = content.size();
          std::string_view line(content.data() + pos, end - pos);
          if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
          emit(line);
          pos = end + 1;
        }
      } else {
        emit(pr_text);
      }
    } else if (*report) {
      const auto corpus = read_corpus(rp_corpus);
      const auto scores_by_id =
          read_score_column(rp_scores.empty() ? rp_corpus : rp_scores, rp_score_column);
      std::vector<double> scores;
      for (const auto& r : corpus) {
        const auto it = scores_by_id.find(r.id);
        if (it == scores_by_id.end()) throw ValidationError("record '" + r.id + "' has no score");
        scores.push_back(it->second);
      }
      const fs::path dir(rp_out);
      fs::create_directories(dir);

      const auto mode = rp_length_mode == "tokens" ? LengthMode::Tokens : LengthMode::Characters;
      const auto lengths = tweet_length_histogram(corpus, rp_bin_width, mode);
      io::write_file_atomic(dir / "length_histogram.csv", histogram_to_csv(lengths));
      emit_chart(lengths,
                 {"Tweet length distribution",
                  mode == LengthMode::Tokens ? "length (tokens)" : "length (characters)", "tweets"},
                 dir / "length_histogram.svg");

      const auto dist = score_distribution(scores, rp_score_bins);
      io::write_file_atomic(dir / "score_histogram.csv", histogram_to_csv(dist));
      emit_chart(dist, {"Lexicon polarity distribution", "polarity", "tweets"},
                 dir / "score_histogram.svg");

      const auto prep = make_preprocessor(rp_flags, false);
      std::array<std::vector<std::vector<std::string>>, kNumClasses> groups;
      for (const auto& r : corpus) {
        if (r.label) groups[index_of(*r.label)].push_back(prep(r.text, r.id).stems());
      }
      const auto tables = wordcloud_frequencies(groups, rp_top_k);
      io::write_file_atomic(dir / "word_frequencies.csv", frequencies_to_csv(tables));
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (tables[c].entries.empty()) continue;
        const std::string name(to_string(label_at(c)));
        emit_chart(tables[c], {"Most frequent " + name + " tokens", "token", "count"},
                   dir / ("words_" + name + ".svg"));
      }

      const auto daily = daily_sentiment(corpus, scores);
      io::write_file_atomic(dir / "daily_sentiment.csv", daily_to_csv(daily));
      if (daily.undated > 0) std::cerr << daily.undated << " undated record(s) left out of the daily series\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
