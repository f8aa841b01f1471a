// rrqa: build question spaces offline, answer questions online, evaluate and
// inspect the results.
//
//   rrqa build   --corpus docs.jsonl --gazetteer entities.jsonl
//   rrqa query   "who won Super Bowl XX" [--explain]
//   rrqa eval    --dataset questions.jsonl [--systems r6,reader-retriever-qsa]
//   rrqa inspect [--space qsa_space.jsonl] [--answer E1]
//
// Global flags may also come from an INI/TOML file given with --config;
// command-line flags win over the file, the file wins over built-in defaults.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  fs::path artifacts_dir = "artifacts";
  rrqa::PipelineConfig pipeline;

  fs::path corpus;
  fs::path gazetteer;

  std::vector<std::string> questions;
  bool explain = false;

  fs::path dataset;
  std::vector<std::string> systems;
  fs::path report;

  fs::path space;
  std::string answer_id;
};

int cmd_build(const Options& opt) {
  const auto result = rrqa::build_artifacts(opt.corpus, opt.gazetteer,
                                            opt.artifacts_dir, opt.pipeline);
  for (const auto& warning : result.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  std::cout << result.manifest.dump(2) << '\n';
  return 0;
}

int answer_one(const rrqa::Engine& engine, const std::string& question,
               bool explain) {
  const auto trace = engine.answer(question);
  if (explain) {
    std::cout << rrqa::to_json(trace).dump(2) << '\n';
  } else {
    std::cout << trace.final.text << '\t' << rrqa::to_string(trace.final.source)
              << '\n';
  }
  return 0;
}

int cmd_query(const Options& opt) {
  const auto engine = rrqa::Engine::load(opt.artifacts_dir, opt.pipeline);
  if (!opt.questions.empty()) {
    std::string question;
    for (const auto& word : opt.questions) {
      if (!question.empty()) question.push_back(' ');
      question += word;
    }
    return answer_one(engine, question, opt.explain);
  }
  // One question per stdin line.
  int status = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      answer_one(engine, line, opt.explain);
    } catch (const rrqa::Error& e) {
      std::cerr << "error [" << rrqa::to_string(e.code()) << "]: " << e.what()
                << '\n';
      status = 1;
    }
    std::cout.flush();
  }
  return status;
}

int cmd_eval(const Options& opt) {
  const auto dataset = rrqa::load_dataset(opt.dataset);
  const auto engine = rrqa::Engine::load(opt.artifacts_dir, opt.pipeline);
  std::vector<std::string> names = opt.systems;
  if (names.empty()) names.assign(rrqa::kSystemNames.begin(), rrqa::kSystemNames.end());
  const auto report = rrqa::evaluate(engine.systems(names), dataset);

  const fs::path prefix =
      opt.report.empty() ? opt.artifacts_dir / "eval_report" : opt.report;
  const auto table = rrqa::format_report(report);
  std::ofstream json_out(fs::path(prefix.string() + ".json"));
  std::ofstream text_out(fs::path(prefix.string() + ".txt"));
  if (!json_out || !text_out) {
    throw rrqa::Error(rrqa::ErrorCode::kIo,
                      "cannot write report files at " + prefix.string());
  }
  json_out << rrqa::to_json(report).dump(2) << '\n';
  text_out << table;
  std::cout << table;
  return 0;
}

int cmd_inspect(const Options& opt) {
  const fs::path path = opt.space.empty()
                            ? opt.artifacts_dir / rrqa::artifacts::kQSetASpace
                            : opt.space;
  if (!fs::exists(path)) {
    throw rrqa::Error(rrqa::ErrorCode::kMissingArtifact,
                      "missing space file " + path.string());
  }
  const rrqa::QSetASpace space =
      rrqa::peek_space_kind(path) == rrqa::SpaceKind::kQA
          ? rrqa::aggregate_questions(rrqa::load_qa_space(path))
          : rrqa::load_qsa_space(path);

  if (opt.answer_id.empty()) {
    const std::size_t answers = space.pairs.size();
    const std::size_t questions = space.question_count();
    std::cout << "answers: " << answers << '\n'
              << "questions: " << questions << '\n'
              << "mean questions per answer: "
              << (answers == 0 ? 0.0
                               : static_cast<double>(questions) /
                                     static_cast<double>(answers))
              << '\n';
    return 0;
  }
  const auto it = space.pairs.find(opt.answer_id);
  if (it == space.pairs.end()) {
    throw rrqa::Error(rrqa::ErrorCode::kUnknownKey,
                      "no answer with id '" + opt.answer_id + "' in " +
                          path.string());
  }
  const auto& pair = it->second;
  std::cout << pair.answer_id << '\t' << pair.canonical_name << '\t'
            << rrqa::to_string(pair.entity_type) << '\n';
  for (std::size_t i = 0; i < pair.questions.size(); ++i) {
    std::cout << "  " << (i + 1) << ". " << pair.questions[i] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reader-retriever open-domain question answering"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file providing default flag values");

  Options opt;
  auto& p = opt.pipeline;
  app.add_option("--artifacts-dir", opt.artifacts_dir,
                 "Directory holding built indexes and spaces")
      ->capture_default_str();
  app.add_option("--min-passage-chars", p.min_passage_chars,
                 "Drop paragraphs shorter than this many characters")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--entity-threshold", p.entity_threshold,
                 "Minimum entity link score")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--k", p.k, "Questions retrieved for {Answer 2}")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--prefilter-n", p.prefilter_n,
                 "BM25 candidates kept before embedding re-ranking")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--bm25-k1", p.bm25.k1, "BM25 k1")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--bm25-b", p.bm25.b, "BM25 b")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--embedding-dim", p.embedding_dim, "Embedding dimension")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--qg-cmd", p.question_generator_command,
                 "External question generator command");
  app.add_option("--reader-cmd", p.reader_command,
                 "External reader command (primary / large)");
  app.add_option("--base-reader-cmd", p.base_reader_command,
                 "External reader command for retriever-reader-base");
  app.add_option("--embed-cmd", p.embedding_command,
                 "External embedding command");

  auto* build = app.add_subcommand("build", "Build passage index, embeddings and question spaces");
  build->add_option("--corpus", opt.corpus, "Line-delimited corpus file")->required();
  build->add_option("--gazetteer", opt.gazetteer, "Line-delimited gazetteer file")->required();

  auto* query = app.add_subcommand("query", "Answer a question (or one per stdin line)");
  query->add_option("question", opt.questions, "Question text");
  query->add_flag("--explain", opt.explain, "Print full provenance as JSON");

  auto* eval = app.add_subcommand("eval", "Exact-match evaluation of the workflows");
  eval->add_option("--dataset", opt.dataset, "Line-delimited QA dataset")->required();
  eval->add_option("--systems", opt.systems,
                   "Comma-separated workflows (default: all)")
      ->delimiter(',');
  eval->add_option("--report", opt.report,
                   "Report path prefix (writes .json and .txt)");

  auto* inspect = app.add_subcommand("inspect", "Print a {Q}A pair or space statistics");
  inspect->add_option("--space", opt.space, "Space file (QA or {Q}A)");
  inspect->add_option("--answer", opt.answer_id, "Answer id to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(opt);
    if (*query) return cmd_query(opt);
    if (*eval) return cmd_eval(opt);
    if (*inspect) return cmd_inspect(opt);
  } catch (const rrqa::Error& e) {
    std::cerr << "error [" << rrqa::to_string(e.code()) << "]: " << e.what()
              << '\n';
    return 1;
  }
  return 0;
}
