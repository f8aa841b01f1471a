#include "rrqa/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

void Bm25Params::validate() const {
  if (!(k1 >= 0.0) || !std::isfinite(k1)) {
    throw Error(ErrorCode::kInvalidArgument, "bm25 k1 must be >= 0");
  }
  if (!(b >= 0.0 && b <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bm25 b must lie in [0, 1]");
  }
}

std::vector<std::string> distinct_terms(std::span<const std::string> terms) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& term : terms) {
    if (seen.insert(term).second) out.push_back(term);
  }
  return out;
}

InvertedIndex InvertedIndex::build(
    const std::vector<std::vector<std::string>>& docs) {
  InvertedIndex index;
  index.doc_lengths_.reserve(docs.size());
  std::size_t total = 0;
  std::unordered_map<std::string, std::uint32_t> counts;
  for (std::size_t doc = 0; doc < docs.size(); ++doc) {
    counts.clear();
    for (const auto& term : docs[doc]) ++counts[term];
    // Postings stay sorted by doc because docs are visited in order.
    for (const auto& [term, frequency] : counts) {
      index.postings_[term].push_back(
          Posting{static_cast<std::uint32_t>(doc), frequency});
    }
    index.doc_lengths_.push_back(docs[doc].size());
    total += docs[doc].size();
  }
  index.average_length_ =
      docs.empty() ? 0.0
                   : static_cast<double>(total) / static_cast<double>(docs.size());
  return index;
}

InvertedIndex InvertedIndex::from_texts(const std::vector<std::string>& texts) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  for (const auto& text : texts) docs.push_back(tokenize_terms(text));
  return build(docs);
}

std::size_t InvertedIndex::document_length(std::size_t doc) const {
  if (doc >= doc_lengths_.size()) {
    throw Error(ErrorCode::kUnknownKey,
                "document " + std::to_string(doc) + " is not in the index");
  }
  return doc_lengths_[doc];
}

std::size_t InvertedIndex::document_frequency(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  return it == postings_.end() ? 0 : it->second.size();
}

std::size_t InvertedIndex::term_frequency(std::string_view term,
                                          std::size_t doc) const {
  auto it = postings_.find(std::string(term));
  if (it == postings_.end()) return 0;
  const auto& list = it->second;
  auto pos = std::lower_bound(
      list.begin(), list.end(), doc,
      [](const Posting& p, std::size_t d) { return p.doc < d; });
  return (pos != list.end() && pos->doc == doc) ? pos->frequency : 0;
}

double InvertedIndex::idf(std::string_view term) const {
  const double n = static_cast<double>(document_count());
  const double df = static_cast<double>(document_frequency(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double InvertedIndex::term_weight(double idf, double frequency, std::size_t doc,
                                  const Bm25Params& params) const {
  const double ratio =
      average_length_ > 0.0
          ? static_cast<double>(doc_lengths_[doc]) / average_length_
          : 0.0;
  const double norm = params.k1 * (1.0 - params.b + params.b * ratio);
  return idf * frequency * (params.k1 + 1.0) / (frequency + norm);
}

double InvertedIndex::score(std::span<const std::string> query_terms,
                            std::size_t doc, const Bm25Params& params) const {
  if (doc >= doc_lengths_.size()) {
    throw Error(ErrorCode::kUnknownKey,
                "document " + std::to_string(doc) + " is not in the index");
  }
  double total = 0.0;
  for (const auto& term : distinct_terms(query_terms)) {
    const std::size_t frequency = term_frequency(term, doc);
    if (frequency == 0) continue;
    total += term_weight(idf(term), static_cast<double>(frequency), doc, params);
  }
  return total;
}

std::vector<double> InvertedIndex::score_all(
    std::span<const std::string> query_terms, const Bm25Params& params) const {
  std::vector<double> scores(doc_lengths_.size(), 0.0);
  for (const auto& term : distinct_terms(query_terms)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double term_idf = idf(term);
    for (const auto& posting : it->second) {
      scores[posting.doc] += term_weight(
          term_idf, static_cast<double>(posting.frequency), posting.doc, params);
    }
  }
  return scores;
}

std::vector<ScoredDoc> InvertedIndex::rank(
    std::span<const std::string> query_terms, std::size_t limit,
    const Bm25Params& params) const {
  const auto scores = score_all(query_terms, params);
  std::vector<ScoredDoc> ranked;
  ranked.reserve(scores.size());
  for (std::size_t doc = 0; doc < scores.size(); ++doc) {
    ranked.push_back(ScoredDoc{doc, scores[doc]});
  }
  const auto better = [](const ScoredDoc& lhs, const ScoredDoc& rhs) {
    return lhs.score != rhs.score ? lhs.score > rhs.score : lhs.doc < rhs.doc;
  };
  limit = std::min(limit, ranked.size());
  std::partial_sort(ranked.begin(),
                    ranked.begin() + static_cast<std::ptrdiff_t>(limit),
                    ranked.end(), better);
  ranked.resize(limit);
  return ranked;
}

double bm25_score(std::span<const std::string> query_terms, std::size_t doc,
                  const InvertedIndex& index, const Bm25Params& params) {
  return index.score(query_terms, doc, params);
}

}  // namespace rrqa
