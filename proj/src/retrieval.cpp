#include "rrqa/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

std::vector<std::string> question_texts(const QASpace& space) {
  std::vector<std::string> texts;
  texts.reserve(space.size());
  for (const auto& pair : space.pairs()) texts.push_back(pair.question.text);
  return texts;
}

std::vector<std::string> passage_texts(const std::vector<Passage>& passages) {
  std::vector<std::string> texts;
  texts.reserve(passages.size());
  for (const auto& passage : passages) texts.push_back(passage.text);
  return texts;
}

void check_rows(const EmbeddingMatrix& embeddings, std::size_t expected,
                const EmbeddingProvider& provider, const char* what) {
  if (embeddings.rows() != expected || (expected > 0 && embeddings.dim() != provider.dim())) {
    throw Error(ErrorCode::kIntegrity,
                std::string(what) + " embeddings hold " +
                    std::to_string(embeddings.rows()) + " rows of dim " +
                    std::to_string(embeddings.dim()) + ", expected " +
                    std::to_string(expected) + " of dim " +
                    std::to_string(provider.dim()));
  }
}

}  // namespace

void RetrievalConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (prefilter_n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "prefilter_n must be at least 1");
  }
  bm25.validate();
}

std::vector<ScoredDoc> two_stage_rank(std::string_view query,
                                      const InvertedIndex& index,
                                      const EmbeddingMatrix& embeddings,
                                      const EmbeddingProvider& provider,
                                      std::size_t limit,
                                      const RetrievalConfig& config) {
  const std::size_t count = index.document_count();
  std::vector<std::size_t> candidates;
  if (count > config.prefilter_n) {
    const auto terms = tokenize_terms(query);
    for (const auto& hit : index.rank(terms, config.prefilter_n, config.bm25)) {
      candidates.push_back(hit.doc);
    }
  } else {
    candidates.resize(count);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  }

  const Embedding query_vector = provider.embed(query);
  std::vector<ScoredDoc> reranked;
  reranked.reserve(candidates.size());
  for (std::size_t doc : candidates) {
    reranked.push_back(ScoredDoc{doc, dot(query_vector, embeddings.row(doc))});
  }
  const auto better = [](const ScoredDoc& lhs, const ScoredDoc& rhs) {
    return lhs.score != rhs.score ? lhs.score > rhs.score : lhs.doc < rhs.doc;
  };
  limit = std::min(limit, reranked.size());
  std::partial_sort(reranked.begin(),
                    reranked.begin() + static_cast<std::ptrdiff_t>(limit),
                    reranked.end(), better);
  reranked.resize(limit);
  return reranked;
}

PassageRetriever::PassageRetriever(
    std::vector<Passage> passages, EmbeddingMatrix embeddings,
    std::shared_ptr<const EmbeddingProvider> provider)
    : passages_(std::move(passages)),
      index_(InvertedIndex::from_texts(passage_texts(passages_))),
      embeddings_(std::move(embeddings)),
      provider_(std::move(provider)) {
  check_rows(embeddings_, passages_.size(), *provider_, "passage");
}

PassageRetriever PassageRetriever::build(
    std::vector<Passage> passages,
    std::shared_ptr<const EmbeddingProvider> provider) {
  auto embeddings = embed_all(*provider, passage_texts(passages));
  return PassageRetriever(std::move(passages), std::move(embeddings),
                          std::move(provider));
}

PassageHit PassageRetriever::retrieve(std::string_view query,
                                      const RetrievalConfig& config) const {
  if (passages_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no passages are indexed");
  }
  const auto ranked =
      two_stage_rank(query, index_, embeddings_, *provider_, 1, config);
  return PassageHit{ranked.front().doc, ranked.front().score};
}

IndividualQuestionRetriever::IndividualQuestionRetriever(
    QASpace space, EmbeddingMatrix embeddings,
    std::shared_ptr<const EmbeddingProvider> provider)
    : space_(std::move(space)),
      index_(InvertedIndex::from_texts(question_texts(space_))),
      embeddings_(std::move(embeddings)),
      provider_(std::move(provider)) {
  check_rows(embeddings_, space_.size(), *provider_, "question");
}

IndividualQuestionRetriever IndividualQuestionRetriever::build(
    QASpace space, std::shared_ptr<const EmbeddingProvider> provider) {
  auto embeddings = embed_all(*provider, question_texts(space));
  return IndividualQuestionRetriever(std::move(space), std::move(embeddings),
                                     std::move(provider));
}

std::vector<RetrievedAnswer> IndividualQuestionRetriever::retrieve(
    std::string_view query, const RetrievalConfig& config) const {
  if (space_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "the QA space is empty");
  }
  const auto ranked =
      two_stage_rank(query, index_, embeddings_, *provider_, config.k, config);
  std::vector<RetrievedAnswer> answers;
  answers.reserve(ranked.size());
  for (const auto& hit : ranked) {
    answers.push_back(
        RetrievedAnswer{space_.pair(hit.doc).answer, hit.score, hit.doc});
  }
  return answers;
}

std::string question_set_document(const QSetAPair& pair) {
  std::string doc;
  for (const auto& question : pair.questions) {
    if (!doc.empty()) doc.push_back(' ');
    doc += question;
  }
  return doc;
}

AggregatedQuestionRetriever::AggregatedQuestionRetriever(QSetASpace space)
    : space_(std::move(space)) {
  std::vector<std::string> docs;
  docs.reserve(space_.pairs.size());
  for (const auto& [id, pair] : space_.pairs) {
    answer_ids_.push_back(id);
    docs.push_back(question_set_document(pair));
  }
  index_ = InvertedIndex::from_texts(docs);
}

AggregatedAnswer AggregatedQuestionRetriever::retrieve(
    std::string_view query, const Bm25Params& params) const {
  if (answer_ids_.empty()) {
    throw Error(ErrorCode::kEmptyInput, "the {Q}A space is empty");
  }
  const auto terms = tokenize_terms(query);
  const auto top = index_.rank(terms, 1, params).front();
  const auto& pair = space_.pairs.at(answer_ids_[top.doc]);
  return AggregatedAnswer{pair.answer_id, pair.canonical_name, top.score};
}

}  // namespace rrqa
