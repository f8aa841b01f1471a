#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rrqa {

/// Okapi BM25 constants; defaults match Elasticsearch.
struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const;
};

struct ScoredDoc {
  std::size_t doc = 0;
  double score = 0.0;

  bool operator==(const ScoredDoc&) const = default;
};

/// Term -> postings over documents keyed by their position 0..N-1.
///
///   score(Q, D) = sum over distinct t in Q of
///       idf(t) * f(t,D) * (k1 + 1) / (f(t,D) + k1 * (1 - b + b * |D| / avgdl))
///   idf(t)      = ln(1 + (N - n_t + 0.5) / (n_t + 0.5))
///
/// Immutable once built.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  static InvertedIndex build(const std::vector<std::vector<std::string>>& docs);
  /// Tokenizes each text with the shared tokenizer first.
  static InvertedIndex from_texts(const std::vector<std::string>& texts);

  std::size_t document_count() const { return doc_lengths_.size(); }
  double average_length() const { return average_length_; }
  std::size_t document_length(std::size_t doc) const;
  std::size_t document_frequency(std::string_view term) const;
  std::size_t term_frequency(std::string_view term, std::size_t doc) const;
  std::size_t vocabulary_size() const { return postings_.size(); }

  double idf(std::string_view term) const;

  /// Throws kUnknownKey when `doc` is out of range.
  double score(std::span<const std::string> query_terms, std::size_t doc,
               const Bm25Params& params) const;

  /// Scores of every document, accumulated term-at-a-time over postings.
  std::vector<double> score_all(std::span<const std::string> query_terms,
                                const Bm25Params& params) const;

  /// Top `limit` documents by score, ties to the smaller position.
  std::vector<ScoredDoc> rank(std::span<const std::string> query_terms,
                              std::size_t limit, const Bm25Params& params) const;

 private:
  struct Posting {
    std::uint32_t doc;
    std::uint32_t frequency;
  };

  double term_weight(double idf, double frequency, std::size_t doc,
                     const Bm25Params& params) const;

  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::size_t> doc_lengths_;
  double average_length_ = 0.0;
};

double bm25_score(std::span<const std::string> query_terms, std::size_t doc,
                  const InvertedIndex& index, const Bm25Params& params);

/// First-occurrence order, duplicates removed.
std::vector<std::string> distinct_terms(std::span<const std::string> terms);

}  // namespace rrqa
