#include "rrqa/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "record_file.hpp"
#include "rrqa/errors.hpp"

namespace rrqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPassageStoreKind = "passage_store";
constexpr const char* kBuiltinProvider = "hashed_tfidf";
constexpr const char* kAdapterProvider = "adapter";

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + stage + "': " + e.what());
  }
}

json mention_to_json(const EntityMention& m) {
  return json{{"mention_id", m.mention_id},
              {"canonical_id", m.canonical_id},
              {"canonical_name", m.canonical_name},
              {"entity_type", std::string(to_string(m.entity_type))},
              {"score", m.score},
              {"char_start", m.char_start},
              {"char_end", m.char_end},
              {"surface", m.surface},
              {"occurrence_index", m.occurrence_index}};
}

EntityMention mention_from_json(const json& r, const std::string& passage_id) {
  EntityMention m;
  m.mention_id = r.at("mention_id").get<std::string>();
  m.canonical_id = r.at("canonical_id").get<std::string>();
  m.canonical_name = r.at("canonical_name").get<std::string>();
  m.entity_type = parse_entity_type(r.at("entity_type").get<std::string>());
  m.score = r.at("score").get<double>();
  m.char_start = r.at("char_start").get<std::size_t>();
  m.char_end = r.at("char_end").get<std::size_t>();
  m.surface = r.at("surface").get<std::string>();
  m.occurrence_index = r.at("occurrence_index").get<std::size_t>();
  m.passage_id = passage_id;
  return m;
}

void write_passage_store(const fs::path& path, const OfflineSpaces& spaces) {
  std::unordered_map<std::string, std::vector<const EntityMention*>> by_passage;
  for (const auto& m : spaces.candidates.mentions()) {
    by_passage[m.passage_id].push_back(&m);
  }
  std::vector<json> records;
  records.reserve(spaces.corpus.passages().size());
  for (const auto& p : spaces.corpus.passages()) {
    json mentions = json::array();
    if (auto it = by_passage.find(p.passage_id); it != by_passage.end()) {
      for (const auto* m : it->second) mentions.push_back(mention_to_json(*m));
    }
    records.push_back({{"passage_id", p.passage_id},
                       {"doc_id", p.doc_id},
                       {"char_start", p.char_start},
                       {"char_end", p.char_end},
                       {"text", p.text},
                       {"mentions", std::move(mentions)}});
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  detail::write_record_file(out, kPassageStoreKind,
                            spaces.corpus.fingerprint(), records);
}

struct PassageStore {
  std::string fingerprint;
  std::vector<Passage> passages;
  std::vector<EntityMention> mentions;
};

PassageStore read_passage_store(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  auto file = detail::read_record_file(in, kPassageStoreKind);
  PassageStore store;
  store.fingerprint = std::move(file.fingerprint);
  for (std::size_t i = 0; i < file.records.size(); ++i) {
    detail::decode_record(file.records[i], i, [&](const json& r) {
      Passage p;
      p.passage_id = r.at("passage_id").get<std::string>();
      p.doc_id = r.at("doc_id").get<std::string>();
      p.char_start = r.at("char_start").get<std::size_t>();
      p.char_end = r.at("char_end").get<std::size_t>();
      p.text = r.at("text").get<std::string>();
      for (const auto& m : r.at("mentions")) {
        store.mentions.push_back(mention_from_json(m, p.passage_id));
      }
      store.passages.push_back(std::move(p));
      return 0;
    });
  }
  return store;
}

void write_json_file(const fs::path& path, const json& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << value.dump(2) << '\n';
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": " + e.what());
  }
}

std::shared_ptr<const Reader> make_reader(const std::string& command) {
  if (command.empty()) return std::make_shared<LexicalReader>();
  return std::make_shared<AdapterReader>(
      std::make_shared<SubprocessChannel>(command));
}

}  // namespace

void PipelineConfig::validate() const {
  if (min_passage_chars < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_passage_chars must be at least 1");
  }
  AnnotatorConfig{entity_threshold}.validate();
  retrieval().validate();
  if (embedding_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
  }
}

RetrievalConfig PipelineConfig::retrieval() const {
  return RetrievalConfig{k, prefilter_n, bm25};
}

OfflineSpaces build_spaces(Corpus corpus, const EntityAnnotator& annotator,
                           const QuestionGenerator& generator) {
  OfflineSpaces spaces;
  spaces.corpus = std::move(corpus);
  spaces.candidates = run_stage("annotate", [&] {
    return collect_candidate_answers(spaces.corpus, annotator);
  });
  spaces.generation = run_stage("generate", [&] {
    return generate_all(spaces.candidates, spaces.corpus, generator);
  });
  spaces.qa = run_stage("space", [&] {
    return QASpace::build(spaces.generation.questions, spaces.candidates,
                          spaces.corpus.fingerprint());
  });
  spaces.qsa = aggregate_questions(spaces.qa);
  return spaces;
}

BuildResult build_artifacts(const fs::path& corpus_path,
                            const fs::path& gazetteer_path,
                            const fs::path& out_dir,
                            const PipelineConfig& config) {
  config.validate();
  BuildResult result;
  Corpus corpus = run_stage("ingest", [&] {
    return load_corpus(corpus_path, config.min_passage_chars);
  });
  const auto gazetteer =
      run_stage("annotate", [&] { return load_gazetteer(gazetteer_path); });
  if (gazetteer.empty()) {
    result.warnings.push_back("gazetteer is empty; the question spaces will have 0 pairs");
  }
  const GazetteerAnnotator annotator(gazetteer,
                                     AnnotatorConfig{config.entity_threshold});

  std::unique_ptr<QuestionGenerator> generator;
  if (config.question_generator_command.empty()) {
    generator = std::make_unique<TemplateQuestionGenerator>();
  } else {
    generator = std::make_unique<AdapterQuestionGenerator>(
        std::make_shared<SubprocessChannel>(config.question_generator_command));
  }
  const OfflineSpaces spaces = build_spaces(std::move(corpus), annotator, *generator);
  if (spaces.generation.degenerate_count() > 0) {
    result.warnings.push_back(
        std::to_string(spaces.generation.degenerate_count()) +
        " mention(s) skipped: context crosses a sentence boundary");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "stage 'write': cannot create " +
                                    out_dir.string() + ": " + ec.message());
  }

  json embedding_config;
  std::shared_ptr<const EmbeddingProvider> provider;
  run_stage("embed", [&] {
    std::vector<std::string> passage_texts;
    for (const auto& p : spaces.corpus.passages()) passage_texts.push_back(p.text);
    if (config.embedding_command.empty()) {
      auto builtin = std::make_shared<HashedTfIdfEmbedder>(
          HashedTfIdfEmbedder::fit(passage_texts, config.embedding_dim));
      write_json_file(out_dir / artifacts::kEmbedder, builtin->to_json());
      embedding_config = {{"provider", kBuiltinProvider},
                          {"dim", config.embedding_dim}};
      provider = builtin;
    } else {
      provider = std::make_shared<AdapterEmbedder>(
          std::make_shared<SubprocessChannel>(config.embedding_command),
          config.embedding_dim);
      embedding_config = {{"provider", kAdapterProvider},
                          {"dim", config.embedding_dim},
                          {"command", config.embedding_command}};
    }
    embed_all(*provider, passage_texts).save(out_dir / artifacts::kPassageEmbeddings);
    std::vector<std::string> question_texts;
    for (const auto& pair : spaces.qa.pairs()) {
      question_texts.push_back(pair.question.text);
    }
    embed_all(*provider, question_texts)
        .save(out_dir / artifacts::kQuestionEmbeddings);
    return 0;
  });

  run_stage("write", [&] {
    write_passage_store(out_dir / artifacts::kPassages, spaces);
    save_space(out_dir / artifacts::kQASpace, spaces.qa);
    save_space(out_dir / artifacts::kQSetASpace, spaces.qsa);
    return 0;
  });

  const auto& stats = spaces.corpus.stats();
  result.manifest = {
      {"format_version", kSpaceFormatVersion},
      {"corpus_fingerprint", spaces.corpus.fingerprint()},
      {"counts",
       {{"documents", stats.document_count},
        {"passages", stats.passage_count},
        {"mean_passage_tokens", stats.mean_passage_tokens},
        {"mentions", spaces.candidates.mention_count()},
        {"answers", spaces.qsa.pairs.size()},
        {"qa_pairs", spaces.qa.size()},
        {"questions", spaces.qsa.question_count()},
        {"degenerate_contexts", spaces.generation.degenerate_count()}}},
      {"config",
       {{"min_passage_chars", config.min_passage_chars},
        {"entity_threshold", config.entity_threshold},
        {"question_generator",
         config.question_generator_command.empty()
             ? json("template")
             : json(config.question_generator_command)}}},
      {"embedding", embedding_config},
      {"warnings", result.warnings},
  };
  run_stage("write", [&] {
    write_json_file(out_dir / artifacts::kManifest, result.manifest);
    return 0;
  });
  return result;
}

Engine::Engine(PassageRetriever passages, IndividualQuestionRetriever individual,
               AggregatedQuestionRetriever aggregated,
               std::vector<EntityMention> mentions, RetrievalConfig config,
               ReaderSet readers)
    : passage_retriever_(std::move(passages)),
      individual_(std::move(individual)),
      aggregated_(std::move(aggregated)),
      config_(config),
      readers_(std::move(readers)) {
  config_.validate();
  for (auto& m : mentions) {
    mentions_by_passage_[m.passage_id].push_back(std::move(m));
  }
  if (!readers_.primary) readers_.primary = std::make_shared<LexicalReader>();
  if (!readers_.base) readers_.base = readers_.primary;
}

Engine Engine::create(const OfflineSpaces& spaces,
                      std::shared_ptr<const EmbeddingProvider> provider,
                      RetrievalConfig config, ReaderSet readers) {
  auto passages = PassageRetriever::build(spaces.corpus.passages(), provider);
  auto individual = IndividualQuestionRetriever::build(spaces.qa, provider);
  return Engine(std::move(passages), std::move(individual),
                AggregatedQuestionRetriever(spaces.qsa),
                spaces.candidates.mentions(), config, std::move(readers));
}

Engine Engine::load(const fs::path& dir, const PipelineConfig& config) {
  config.validate();
  for (const char* name : {artifacts::kManifest, artifacts::kPassages,
                           artifacts::kPassageEmbeddings,
                           artifacts::kQuestionEmbeddings, artifacts::kQASpace,
                           artifacts::kQSetASpace}) {
    if (!fs::exists(dir / name)) {
      throw Error(ErrorCode::kMissingArtifact,
                  "missing artifact " + (dir / name).string() +
                      " (run 'build' first)");
    }
  }
  const json manifest = read_json_file(dir / artifacts::kManifest);
  std::string fingerprint;
  std::string provider_name;
  std::size_t dim = 0;
  std::string embed_command;
  try {
    fingerprint = manifest.at("corpus_fingerprint").get<std::string>();
    const auto& embedding = manifest.at("embedding");
    provider_name = embedding.at("provider").get<std::string>();
    dim = embedding.at("dim").get<std::size_t>();
    embed_command = embedding.value("command", std::string{});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("manifest: ") + e.what());
  }

  std::shared_ptr<const EmbeddingProvider> provider;
  if (provider_name == kBuiltinProvider) {
    if (!fs::exists(dir / artifacts::kEmbedder)) {
      throw Error(ErrorCode::kMissingArtifact,
                  "missing artifact " + (dir / artifacts::kEmbedder).string());
    }
    provider = std::make_shared<HashedTfIdfEmbedder>(
        HashedTfIdfEmbedder::from_json(read_json_file(dir / artifacts::kEmbedder)));
  } else {
    const std::string command =
        config.embedding_command.empty() ? embed_command : config.embedding_command;
    provider = std::make_shared<AdapterEmbedder>(
        std::make_shared<SubprocessChannel>(command), dim);
  }

  auto store = read_passage_store(dir / artifacts::kPassages);
  auto qa = load_qa_space(dir / artifacts::kQASpace);
  auto qsa = load_qsa_space(dir / artifacts::kQSetASpace);
  for (const std::string* seen : std::initializer_list<const std::string*>{
           &store.fingerprint, &qa.corpus_fingerprint(),
           &qsa.corpus_fingerprint}) {
    if (*seen != fingerprint) {
      throw Error(ErrorCode::kIntegrity,
                  "artifacts in " + dir.string() +
                      " come from different corpora (fingerprint " + *seen +
                      " vs manifest " + fingerprint + ")");
    }
  }
  auto passage_embeddings = EmbeddingMatrix::load(dir / artifacts::kPassageEmbeddings);
  auto question_embeddings =
      EmbeddingMatrix::load(dir / artifacts::kQuestionEmbeddings);

  ReaderSet readers{make_reader(config.reader_command),
                    make_reader(config.base_reader_command)};
  return Engine(
      PassageRetriever(std::move(store.passages), std::move(passage_embeddings),
                       provider),
      IndividualQuestionRetriever(std::move(qa), std::move(question_embeddings),
                                  provider),
      AggregatedQuestionRetriever(std::move(qsa)), std::move(store.mentions),
      config.retrieval(), std::move(readers));
}

std::span<const EntityMention> Engine::mentions_in(
    const std::string& passage_id) const {
  auto it = mentions_by_passage_.find(passage_id);
  if (it == mentions_by_passage_.end()) return {};
  return it->second;
}

std::optional<AnswerSpan> Engine::read(std::string_view question,
                                       const Passage& passage,
                                       const Reader& reader,
                                       std::string* error) const {
  try {
    return reader.read(question, passage, mentions_in(passage.passage_id));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoAnswer) throw;
    if (error != nullptr) *error = e.what();
    return std::nullopt;
  }
}

QueryTrace Engine::answer(std::string_view question) const {
  QueryTrace trace;
  trace.question = std::string(question);
  const auto hit = passage_retriever_.retrieve(question, config_);
  trace.passage = passage_retriever_.passage(hit.position);
  trace.passage_similarity = hit.similarity;
  trace.answer1 = read(question, trace.passage, *readers_.primary,
                       &trace.answer1_error);
  trace.answer2 = individual_.retrieve(question, config_);
  trace.answer3 = aggregated_.retrieve(question, config_.bm25);
  trace.final = aggregate_final(trace.answer1, trace.answer2, trace.answer3);
  return trace;
}

std::string Engine::answer_with(std::string_view system,
                                std::string_view question) const {
  if (system == "r6") return answer(question).final.text;
  if (system == "retriever-reader-large" || system == "retriever-reader-base") {
    const auto hit = passage_retriever_.retrieve(question, config_);
    const Reader& reader = system == "retriever-reader-large" ? *readers_.primary
                                                              : *readers_.base;
    std::string error;
    auto span = read(question, passage_retriever_.passage(hit.position), reader,
                     &error);
    if (!span) throw Error(ErrorCode::kNoAnswer, error);
    return span->text;
  }
  if (system == "reader-retriever-qa") {
    std::vector<std::string> names;
    for (const auto& entry : individual_.retrieve(question, config_)) {
      names.push_back(entry.answer.canonical_name);
    }
    return majority_vote(names);
  }
  if (system == "reader-retriever-qsa") {
    return aggregated_.retrieve(question, config_.bm25).canonical_name;
  }
  std::string valid;
  for (auto name : kSystemNames) {
    if (!valid.empty()) valid += ", ";
    valid += name;
  }
  throw Error(ErrorCode::kUnknownSystem,
              "unknown system '" + std::string(system) + "' (valid: " + valid + ")");
}

std::vector<NamedSystem> Engine::systems(
    const std::vector<std::string>& names) const {
  std::vector<NamedSystem> out;
  for (const auto& name : names) {
    bool known = false;
    for (auto valid : kSystemNames) known = known || valid == name;
    if (!known) answer_with(name, "");  // throws with the valid list
    out.push_back(NamedSystem{name, [this, name](const std::string& question) {
                                return answer_with(name, question);
                              }});
  }
  return out;
}

json to_json(const QueryTrace& trace) {
  json answer2 = json::array();
  for (const auto& entry : trace.answer2) {
    answer2.push_back({{"canonical_id", entry.answer.canonical_id},
                       {"canonical_name", entry.answer.canonical_name},
                       {"surface", entry.answer.surface},
                       {"similarity", entry.similarity},
                       {"pair_position", entry.pair_position}});
  }
  json answer1 = nullptr;
  if (trace.answer1) {
    answer1 = {{"text", trace.answer1->text},
               {"passage_id", trace.answer1->passage_id},
               {"char_start", trace.answer1->char_start},
               {"char_end", trace.answer1->char_end},
               {"score", trace.answer1->score}};
  }
  return {{"question", trace.question},
          {"passage",
           {{"passage_id", trace.passage.passage_id},
            {"similarity", trace.passage_similarity},
            {"text", trace.passage.text}}},
          {"answer1", answer1},
          {"answer1_error", trace.answer1_error},
          {"answer2", answer2},
          {"voted_answer2", trace.final.voted_answer2
                                ? json(*trace.final.voted_answer2)
                                : json(nullptr)},
          {"answer3",
           {{"answer_id", trace.answer3.answer_id},
            {"canonical_name", trace.answer3.canonical_name},
            {"score", trace.answer3.score}}},
          {"final", to_json(trace.final)}};
}

}  // namespace rrqa
