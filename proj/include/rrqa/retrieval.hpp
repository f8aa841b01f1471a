#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rrqa/bm25.hpp"
#include "rrqa/corpus.hpp"
#include "rrqa/embedding.hpp"
#include "rrqa/entity.hpp"
#include "rrqa/question_space.hpp"

namespace rrqa {

inline constexpr std::size_t kDefaultTopK = 10;
inline constexpr std::size_t kDefaultPrefilterN = 10000;

struct RetrievalConfig {
  std::size_t k = kDefaultTopK;
  std::size_t prefilter_n = kDefaultPrefilterN;
  Bm25Params bm25;

  void validate() const;
};

/// BM25 keeps the best `prefilter_n` documents (ties to earlier position),
/// which are then re-ranked by dot product with the query embedding (ties to
/// earlier position). Returns the best `limit` of the re-ranked list.
std::vector<ScoredDoc> two_stage_rank(std::string_view query,
                                      const InvertedIndex& index,
                                      const EmbeddingMatrix& embeddings,
                                      const EmbeddingProvider& provider,
                                      std::size_t limit,
                                      const RetrievalConfig& config);

struct PassageHit {
  std::size_t position = 0;
  double similarity = 0.0;
};

/// Retriever half of the retriever-reader: query -> the one best passage.
class PassageRetriever {
 public:
  PassageRetriever(std::vector<Passage> passages, EmbeddingMatrix embeddings,
                   std::shared_ptr<const EmbeddingProvider> provider);

  /// Embeds the passages with `provider`.
  static PassageRetriever build(std::vector<Passage> passages,
                                std::shared_ptr<const EmbeddingProvider> provider);

  /// Throws kEmptyInput when no passages are indexed.
  PassageHit retrieve(std::string_view query, const RetrievalConfig& config) const;

  const Passage& passage(std::size_t position) const {
    return passages_[position];
  }
  const std::vector<Passage>& passages() const { return passages_; }
  const InvertedIndex& index() const { return index_; }
  const EmbeddingMatrix& embeddings() const { return embeddings_; }

 private:
  std::vector<Passage> passages_;
  InvertedIndex index_;
  EmbeddingMatrix embeddings_;
  std::shared_ptr<const EmbeddingProvider> provider_;
};

/// One entry of {Answer 2}.
struct RetrievedAnswer {
  EntityMention answer;
  double similarity = 0.0;
  std::size_t pair_position = 0;
};

/// Ranks every generated question of the QA Space against the query and
/// returns the answers of the top k, best first. Duplicated answers are kept.
class IndividualQuestionRetriever {
 public:
  IndividualQuestionRetriever(QASpace space, EmbeddingMatrix embeddings,
                              std::shared_ptr<const EmbeddingProvider> provider);

  static IndividualQuestionRetriever build(
      QASpace space, std::shared_ptr<const EmbeddingProvider> provider);

  /// Length is min(k, |pairs|). Throws kEmptyInput on an empty space.
  std::vector<RetrievedAnswer> retrieve(std::string_view query,
                                        const RetrievalConfig& config) const;

  const QASpace& space() const { return space_; }
  const InvertedIndex& index() const { return index_; }
  const EmbeddingMatrix& embeddings() const { return embeddings_; }

 private:
  QASpace space_;
  InvertedIndex index_;
  EmbeddingMatrix embeddings_;
  std::shared_ptr<const EmbeddingProvider> provider_;
};

/// Answer 3.
struct AggregatedAnswer {
  std::string answer_id;
  std::string canonical_name;
  double score = 0.0;
};

/// Treats each answer's question set, joined with single spaces, as one BM25
/// document and returns the best-scoring answer (ties to the smaller id).
class AggregatedQuestionRetriever {
 public:
  explicit AggregatedQuestionRetriever(QSetASpace space);

  /// Throws kEmptyInput on an empty space.
  AggregatedAnswer retrieve(std::string_view query, const Bm25Params& params) const;

  const QSetASpace& space() const { return space_; }
  const InvertedIndex& index() const { return index_; }
  /// Answer ids in index (= lexicographic) order.
  const std::vector<std::string>& answer_ids() const { return answer_ids_; }

 private:
  QSetASpace space_;
  std::vector<std::string> answer_ids_;
  InvertedIndex index_;
};

/// The BM25 document of one answer: its questions joined by single spaces.
std::string question_set_document(const QSetAPair& pair);

}  // namespace rrqa
