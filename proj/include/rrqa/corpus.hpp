#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rrqa {

inline constexpr std::size_t kDefaultMinPassageChars = 50;

struct Document {
  std::string doc_id;
  std::optional<std::string> title;
  std::string body;
};

/// A paragraph of a document kept as a retrieval unit. Offsets are UTF-8 byte
/// offsets into the parent body; `text` is exactly that slice.
struct Passage {
  std::string passage_id;
  std::string doc_id;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Passage&) const = default;
};

struct CorpusStats {
  std::size_t document_count = 0;
  std::size_t passage_count = 0;
  double mean_passage_tokens = 0.0;
};

/// Paragraphs (runs of lines separated by blank lines, trimmed) whose length in
/// code points is at least `min_chars`, in document order.
std::vector<Passage> split_passages(const Document& doc, std::size_t min_chars);

/// Immutable after construction.
class Corpus {
 public:
  Corpus() = default;

  /// Throws kDuplicateId on a repeated doc_id, kInvalidArgument on an empty body.
  static Corpus from_documents(std::vector<Document> documents,
                               std::size_t min_chars);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Passage>& passages() const { return passages_; }
  const CorpusStats& stats() const { return stats_; }

  /// Stable hash of every document's id, title and body, in file order.
  const std::string& fingerprint() const { return fingerprint_; }

  const Passage* find_passage(std::string_view passage_id) const;

 private:
  std::vector<Document> documents_;
  std::vector<Passage> passages_;
  std::unordered_map<std::string, std::size_t> passage_lookup_;
  CorpusStats stats_;
  std::string fingerprint_;
};

/// One JSON object per line: {"doc_id", "title"?, "body"}. Blank lines are
/// skipped. Errors name the 1-based line number.
Corpus parse_corpus(std::istream& in, std::size_t min_chars);
Corpus load_corpus(const std::filesystem::path& path, std::size_t min_chars);

}  // namespace rrqa
