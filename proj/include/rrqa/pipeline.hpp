#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "rrqa/aggregation.hpp"
#include "rrqa/corpus.hpp"
#include "rrqa/embedding.hpp"
#include "rrqa/entity.hpp"
#include "rrqa/evaluation.hpp"
#include "rrqa/question_gen.hpp"
#include "rrqa/question_space.hpp"
#include "rrqa/reader.hpp"
#include "rrqa/retrieval.hpp"

namespace rrqa {

struct PipelineConfig {
  std::size_t min_passage_chars = kDefaultMinPassageChars;
  double entity_threshold = kDefaultEntityThreshold;
  std::size_t k = kDefaultTopK;
  std::size_t prefilter_n = kDefaultPrefilterN;
  Bm25Params bm25;
  std::size_t embedding_dim = kDefaultEmbeddingDim;

  // Optional external models, each a shell command speaking its line protocol.
  std::string question_generator_command;
  std::string reader_command;
  std::string base_reader_command;
  std::string embedding_command;

  void validate() const;
  RetrievalConfig retrieval() const;
};

/// Everything above the offline/online line, held in memory.
struct OfflineSpaces {
  Corpus corpus;
  CandidateAnswerTable candidates;
  GenerationResult generation;
  QASpace qa;
  QSetASpace qsa;
};

OfflineSpaces build_spaces(Corpus corpus, const EntityAnnotator& annotator,
                           const QuestionGenerator& generator);

/// Artifact file names inside an artifacts directory.
namespace artifacts {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kPassages = "passages.jsonl";
inline constexpr const char* kEmbedder = "embedder.json";
inline constexpr const char* kPassageEmbeddings = "passage_embeddings.bin";
inline constexpr const char* kQuestionEmbeddings = "question_embeddings.bin";
inline constexpr const char* kQASpace = "qa_space.jsonl";
inline constexpr const char* kQSetASpace = "qsa_space.jsonl";
}  // namespace artifacts

struct BuildResult {
  nlohmann::json manifest;
  std::vector<std::string> warnings;
};

/// Runs ingest -> annotate -> generate -> space -> embed -> write. Failures
/// keep their error code and name the stage in the message.
BuildResult build_artifacts(const std::filesystem::path& corpus_path,
                            const std::filesystem::path& gazetteer_path,
                            const std::filesystem::path& out_dir,
                            const PipelineConfig& config);

/// The workflows the engine can run, in report order.
inline constexpr std::array<std::string_view, 5> kSystemNames = {
    "r6", "retriever-reader-large", "retriever-reader-base",
    "reader-retriever-qa", "reader-retriever-qsa"};

/// Full provenance of one online answer.
struct QueryTrace {
  std::string question;
  Passage passage;
  double passage_similarity = 0.0;
  std::optional<AnswerSpan> answer1;
  std::string answer1_error;
  std::vector<RetrievedAnswer> answer2;
  AggregatedAnswer answer3;
  FinalAnswer final;
};

nlohmann::json to_json(const QueryTrace& trace);

struct ReaderSet {
  std::shared_ptr<const Reader> primary;
  std::shared_ptr<const Reader> base;
};

/// The online half: three retrievers, the readers and the aggregator over
/// immutable indexes. Queries are const and may run concurrently.
class Engine {
 public:
  /// Embeds passages and questions with `provider`. Null readers default to
  /// the lexical reader.
  static Engine create(const OfflineSpaces& spaces,
                       std::shared_ptr<const EmbeddingProvider> provider,
                       RetrievalConfig config, ReaderSet readers = {});

  /// Throws kMissingArtifact naming the first absent file.
  static Engine load(const std::filesystem::path& artifacts_dir,
                     const PipelineConfig& config);

  QueryTrace answer(std::string_view question) const;

  /// Answer text of one named workflow. Throws when that workflow produces no
  /// answer (e.g. the reader finds nothing).
  std::string answer_with(std::string_view system, std::string_view question) const;

  /// Throws kUnknownSystem listing the valid names.
  std::vector<NamedSystem> systems(const std::vector<std::string>& names) const;

  const PassageRetriever& passages() const { return passage_retriever_; }
  const IndividualQuestionRetriever& questions() const { return individual_; }
  const AggregatedQuestionRetriever& question_sets() const { return aggregated_; }
  const RetrievalConfig& config() const { return config_; }
  std::span<const EntityMention> mentions_in(const std::string& passage_id) const;

 private:
  Engine(PassageRetriever passages, IndividualQuestionRetriever individual,
         AggregatedQuestionRetriever aggregated,
         std::vector<EntityMention> mentions, RetrievalConfig config,
         ReaderSet readers);

  std::optional<AnswerSpan> read(std::string_view question,
                                 const Passage& passage, const Reader& reader,
                                 std::string* error) const;

  PassageRetriever passage_retriever_;
  IndividualQuestionRetriever individual_;
  AggregatedQuestionRetriever aggregated_;
  std::unordered_map<std::string, std::vector<EntityMention>> mentions_by_passage_;
  RetrievalConfig config_;
  ReaderSet readers_;
};

}  // namespace rrqa
