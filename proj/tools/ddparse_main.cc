// ddparse: train, run and evaluate the discourse dependency parser.
//
//   ddparse train    --corpus DIR --model FILE
//   ddparse parse    --corpus DIR --model FILE --out DIR [--random]
//   ddparse pipeline --corpus DIR --model FILE --out DIR --adapter dict --dict-file F
//   ddparse evaluate --pred DIR --gold DIR [--ablate ...]
//   ddparse stats    --corpus DIR
//
// Every option can also be given as `key=value` in a --config file; flags on
// the command line win.

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ddparse/errors.h"
#include "ddparse/eval.h"
#include "ddparse/parser.h"
#include "ddparse/pipeline.h"
#include "ddparse/text.h"
#include "ddparse/translation.h"
#include "ddparse/treebank.h"

namespace fs = std::filesystem;
using namespace ddparse;

namespace {

struct CliConfig {
  std::string corpus;
  std::string model;
  std::string out;
  std::string pred;
  std::string gold;
  std::uint64_t seed = 42;
  std::string granularity = "fine";
  int jobs = 1;

  int epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-5;
  bool random = false;

  std::string adapter = "identity";
  std::string endpoint;
  std::string api_key_env = "DDPARSE_MT_API_KEY";
  std::string dict_file;
  std::string cache;
  std::string english_out;
  std::string source_lang = "zh";
  std::string target_lang = "en";
  bool punct_fix = true;
  bool pronoun_fix = true;
  bool two_part = true;
  std::string topic_cues;
  std::string pronouns;
  bool ablate = false;
};

std::vector<std::string> ReadList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = text::Trim(line);
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Returns the per-index
// error message ("" on success).
std::vector<std::string> ParallelFor(std::size_t n, int jobs,
                                     const std::function<void(std::size_t)>& fn) {
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return errors;
}

std::vector<DiscourseTree> LoadNonEmpty(const std::string& path) {
  if (path.empty()) throw Error("--corpus is required");
  auto corpus = LoadCorpus(path);
  if (corpus.empty()) throw EmptyCorpus();
  return corpus;
}

std::shared_ptr<TranslationAdapter> MakeAdapter(const CliConfig& c) {
  std::shared_ptr<TranslationAdapter> adapter;
  if (c.adapter == "identity") {
    adapter = std::make_shared<IdentityAdapter>();
  } else if (c.adapter == "dict") {
    if (c.dict_file.empty()) throw Error("--adapter dict needs --dict-file");
    adapter = std::make_shared<DictionaryAdapter>(DictionaryAdapter::FromFile(c.dict_file));
  } else if (c.adapter == "http") {
    if (c.endpoint.empty()) throw Error("--adapter http needs --endpoint");
    HttpAdapterConfig hc;
    hc.endpoint = c.endpoint;
    hc.api_key_env = c.api_key_env;
    adapter = std::make_shared<HttpAdapter>(hc);
  } else {
    throw Error("unknown adapter '" + c.adapter + "'");
  }
  if (!c.cache.empty()) {
    adapter = std::make_shared<CachingAdapter>(adapter, c.cache, c.source_lang, c.target_lang);
  }
  return adapter;
}

PipelineConfig MakePipelineConfig(const CliConfig& c) {
  PipelineConfig p;
  p.punct_fix = c.punct_fix;
  p.pronoun_fix = c.pronoun_fix;
  p.two_part = c.two_part;
  if (!c.topic_cues.empty()) p.topic_cues = ReadList(c.topic_cues);
  if (!c.pronouns.empty()) p.relative_pronouns = ReadList(c.pronouns);
  p.source_lang = c.source_lang;
  p.target_lang = c.target_lang;
  return p;
}

ParserModel LoadParser(const CliConfig& c) {
  if (c.model.empty()) throw Error("--model is required");
  return ParserModel::Load(fs::path(c.model));
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

int CmdTrain(const CliConfig& c) {
  const auto corpus = LoadNonEmpty(c.corpus);
  if (c.model.empty()) throw Error("--model is required");
  TrainConfig tc;
  tc.epochs = c.epochs;
  tc.learning_rate = c.learning_rate;
  tc.l2 = c.l2;
  tc.seed = c.seed;
  TrainSummary summary;
  const ParserModel model = TrainParser(corpus, tc, ParseGranularity(c.granularity), &summary);
  model.Save(fs::path(c.model));
  std::cout << "documents               " << corpus.size() << '\n'
            << "annotated documents     " << summary.n_docs << '\n'
            << "structure examples      " << summary.n_structure_examples << '\n'
            << "relation examples       " << summary.n_relation_examples << '\n'
            << "skipped non-projective  " << summary.n_skipped_nonprojective << '\n'
            << "relation labels         " << summary.n_relation_labels << '\n'
            << "model                   " << c.model << '\n';
  return 0;
}

int WriteOutputs(const std::vector<DiscourseTree>& corpus,
                 const std::vector<std::optional<DiscourseTree>>& results,
                 const std::vector<std::string>& errors, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  int failed = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!errors[i].empty() || !results[i]) {
      std::cerr << "skipped " << corpus[i].doc_id << ": " << errors[i] << '\n';
      ++failed;
      continue;
    }
    SaveDocument(*results[i], out_dir / (corpus[i].doc_id + ".json"));
  }
  std::cout << "parsed " << corpus.size() - failed << " of " << corpus.size()
            << " documents into " << out_dir.string() << '\n';
  return failed == 0 ? 0 : 1;
}

int CmdParse(const CliConfig& c) {
  const auto corpus = LoadNonEmpty(c.corpus);
  if (c.out.empty()) throw Error("--out is required");
  std::optional<ParserModel> model;
  if (!c.random) model = LoadParser(c);
  const Granularity g = ParseGranularity(c.granularity);
  std::vector<std::optional<DiscourseTree>> results(corpus.size());
  const auto errors = ParallelFor(corpus.size(), c.jobs, [&](std::size_t i) {
    results[i] = c.random ? RandomParse(corpus[i], c.seed + i, g) : Parse(corpus[i], *model);
  });
  return WriteOutputs(corpus, results, errors, c.out);
}

int CmdPipeline(const CliConfig& c) {
  const auto corpus = LoadNonEmpty(c.corpus);
  if (c.out.empty()) throw Error("--out is required");
  const ParserModel model = LoadParser(c);
  const PipelineConfig pc = MakePipelineConfig(c);
  const auto adapter = MakeAdapter(c);
  std::vector<std::optional<DiscourseTree>> results(corpus.size());
  std::vector<std::optional<DiscourseTree>> english(corpus.size());
  const auto errors = ParallelFor(corpus.size(), c.jobs, [&](std::size_t i) {
    PipelineResult r = RunPipelineDetailed(corpus[i], pc, model, *adapter);
    results[i] = std::move(r.tree);
    english[i] = std::move(r.english);
  });
  if (!c.english_out.empty()) {
    fs::create_directories(c.english_out);
    for (const auto& doc : english) {
      if (doc) SaveDocument(*doc, fs::path(c.english_out) / (doc->doc_id + ".json"));
    }
  }
  return WriteOutputs(corpus, results, errors, c.out);
}

// Orders `preds` like `golds` by doc id; throws Mismatch if the sets differ.
std::vector<DiscourseTree> AlignByDocId(std::vector<DiscourseTree> preds,
                                        const std::vector<DiscourseTree>& golds) {
  std::map<std::string, DiscourseTree> by_id;
  for (auto& p : preds) {
    const std::string id = p.doc_id;
    by_id.emplace(id, std::move(p));
  }
  if (by_id.size() != golds.size()) {
    throw Mismatch("predicted and gold corpora contain different documents");
  }
  std::vector<DiscourseTree> aligned;
  for (const auto& g : golds) {
    auto it = by_id.find(g.doc_id);
    if (it == by_id.end()) throw Mismatch("no prediction for document " + g.doc_id);
    aligned.push_back(std::move(it->second));
  }
  return aligned;
}

int CmdEvaluate(const CliConfig& c) {
  const Granularity g = ParseGranularity(c.granularity);
  const std::string gold_path = c.gold.empty() ? c.corpus : c.gold;
  const auto golds = LoadNonEmpty(gold_path);
  if (c.ablate) {
    const ParserModel model = LoadParser(c);
    const auto adapter = MakeAdapter(c);
    const auto rows = AblationReport(golds, model, *adapter, MakePipelineConfig(c), g);
    std::cout << AblationTable(rows);
    if (!c.out.empty()) WriteFile(c.out, AblationJson(rows));
    return 0;
  }
  if (c.pred.empty()) throw Error("--pred is required (or use --ablate)");
  const auto preds = AlignByDocId(LoadCorpus(c.pred), golds);
  const EvalReport report = Evaluate(preds, golds, g);
  std::cout << report.ToTable();
  if (!c.out.empty()) WriteFile(c.out, report.ToJson());
  return 0;
}

int CmdStats(const CliConfig& c) {
  std::cout << ComputeCorpusStats(LoadNonEmpty(c.corpus)).ToTable();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discourse dependency parsing toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  CliConfig c;
  app.add_option("--corpus", c.corpus, "Corpus directory (or a single document file)");
  app.add_option("--model", c.model, "Parser model file");
  app.add_option("--out", c.out, "Output directory (parse/pipeline) or report file");
  app.add_option("--pred", c.pred, "Predicted corpus for evaluate");
  app.add_option("--gold", c.gold, "Gold corpus for evaluate");
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--granularity", c.granularity, "Relation granularity")
      ->check(CLI::IsMember({"coarse", "fine"}))
      ->capture_default_str();
  app.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--epochs", c.epochs, "Training epochs")->capture_default_str();
  app.add_option("--learning-rate", c.learning_rate, "Initial SGD step")->capture_default_str();
  app.add_option("--l2", c.l2, "L2 regularization")->capture_default_str();
  app.add_flag("--random", c.random, "parse: random baseline instead of a model");
  app.add_option("--adapter", c.adapter, "Translation adapter")
      ->check(CLI::IsMember({"http", "dict", "identity"}))
      ->capture_default_str();
  app.add_option("--endpoint", c.endpoint, "HTTP translation endpoint");
  app.add_option("--api-key-env", c.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  app.add_option("--dict-file", c.dict_file, "source<TAB>target dictionary for --adapter dict");
  app.add_option("--cache", c.cache, "Translation cache file");
  app.add_option("--english-out", c.english_out, "pipeline: also write translated documents");
  app.add_option("--source-lang", c.source_lang)->capture_default_str();
  app.add_option("--target-lang", c.target_lang)->capture_default_str();
  app.add_flag("--punct-fix,!--no-punct-fix", c.punct_fix, "Punctuation modification");
  app.add_flag("--pronoun-fix,!--no-pronoun-fix", c.pronoun_fix,
               "Relative pronoun adjustment");
  app.add_flag("--two-part,!--no-two-part", c.two_part, "Topic-split parsing");
  app.add_option("--topic-cues", c.topic_cues, "File with one topic cue per line");
  app.add_option("--pronouns", c.pronouns, "File with one relative pronoun per line");
  app.add_flag("--ablate", c.ablate, "evaluate: run the cumulative ablation grid");

  std::map<std::string, std::function<int(const CliConfig&)>> commands = {
      {"train", CmdTrain},       {"parse", CmdParse}, {"pipeline", CmdPipeline},
      {"evaluate", CmdEvaluate}, {"stats", CmdStats},
  };
  app.add_subcommand("train", "Train a parser model");
  app.add_subcommand("parse", "Parse a corpus with a trained model");
  app.add_subcommand("pipeline", "Zero-shot parse source-language documents via translation");
  app.add_subcommand("evaluate", "Score predictions against gold trees");
  app.add_subcommand("stats", "Corpus statistics");

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return commands.at(name)(c);
  } catch (const std::exception& e) {
    std::cerr << "ddparse " << name << ": " << e.what() << '\n';
    return 1;
  }
}
