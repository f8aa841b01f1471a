#include "rrqa/corpus.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include "json.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

bool is_blank(std::string_view line) { return trim(line).empty(); }

void push_paragraph(const Document& doc, std::string_view body,
                    std::size_t begin, std::size_t end, std::size_t min_chars,
                    std::vector<Passage>& out) {
  std::string_view raw = body.substr(begin, end - begin);
  std::string_view trimmed = trim(raw);
  if (trimmed.empty()) return;
  const std::size_t start =
      begin + static_cast<std::size_t>(trimmed.data() - raw.data());
  if (utf8_length(trimmed) < min_chars) return;
  Passage passage;
  passage.passage_id = doc.doc_id + "#" + std::to_string(out.size());
  passage.doc_id = doc.doc_id;
  passage.text = std::string(trimmed);
  passage.char_start = start;
  passage.char_end = start + trimmed.size();
  out.push_back(std::move(passage));
}

}  // namespace

std::vector<Passage> split_passages(const Document& doc, std::size_t min_chars) {
  if (min_chars < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_chars must be at least 1");
  }
  if (doc.body.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "document '" + doc.doc_id + "' has an empty body");
  }
  std::vector<Passage> passages;
  const std::string_view body = doc.body;
  std::size_t paragraph_begin = 0;
  bool in_paragraph = false;
  std::size_t line_begin = 0;
  while (line_begin <= body.size()) {
    std::size_t line_end = body.find('\n', line_begin);
    if (line_end == std::string_view::npos) line_end = body.size();
    const bool blank = is_blank(body.substr(line_begin, line_end - line_begin));
    if (blank && in_paragraph) {
      push_paragraph(doc, body, paragraph_begin, line_begin, min_chars,
                     passages);
      in_paragraph = false;
    } else if (!blank && !in_paragraph) {
      paragraph_begin = line_begin;
      in_paragraph = true;
    }
    line_begin = line_end + 1;
  }
  if (in_paragraph) {
    push_paragraph(doc, body, paragraph_begin, body.size(), min_chars,
                   passages);
  }
  return passages;
}

Corpus Corpus::from_documents(std::vector<Document> documents,
                              std::size_t min_chars) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::uint64_t hash = fnv1a64("");
  std::size_t total_tokens = 0;
  for (const auto& doc : documents) {
    if (!seen.insert(doc.doc_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate doc_id '" + doc.doc_id + "'");
    }
    for (auto& passage : split_passages(doc, min_chars)) {
      total_tokens += tokenize(passage.text).size();
      corpus.passage_lookup_.emplace(passage.passage_id,
                                     corpus.passages_.size());
      corpus.passages_.push_back(std::move(passage));
    }
    hash = fnv1a64(doc.doc_id, hash);
    hash = fnv1a64("\x1f", hash);
    hash = fnv1a64(doc.title.value_or(""), hash);
    hash = fnv1a64("\x1f", hash);
    hash = fnv1a64(doc.body, hash);
    hash = fnv1a64("\x1e", hash);
  }
  corpus.documents_ = std::move(documents);
  corpus.stats_.document_count = corpus.documents_.size();
  corpus.stats_.passage_count = corpus.passages_.size();
  corpus.stats_.mean_passage_tokens =
      corpus.passages_.empty()
          ? 0.0
          : static_cast<double>(total_tokens) /
                static_cast<double>(corpus.passages_.size());
  corpus.fingerprint_ = to_hex(hash);
  return corpus;
}

const Passage* Corpus::find_passage(std::string_view passage_id) const {
  auto it = passage_lookup_.find(std::string(passage_id));
  return it == passage_lookup_.end() ? nullptr : &passages_[it->second];
}

Corpus parse_corpus(std::istream& in, std::size_t min_chars) {
  std::vector<Document> documents;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::string where = "corpus line " + std::to_string(line_number);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedRecord, where + ": " + e.what());
    }
    if (!record.is_object() || !record.contains("doc_id") ||
        !record["doc_id"].is_string() || !record.contains("body") ||
        !record["body"].is_string()) {
      throw Error(ErrorCode::kMalformedRecord,
                  where + ": expected string fields doc_id and body");
    }
    Document doc;
    doc.doc_id = record["doc_id"].get<std::string>();
    doc.body = record["body"].get<std::string>();
    if (record.contains("title") && !record["title"].is_null()) {
      if (!record["title"].is_string()) {
        throw Error(ErrorCode::kMalformedRecord, where + ": title must be a string");
      }
      doc.title = record["title"].get<std::string>();
    }
    if (doc.body.empty()) {
      throw Error(ErrorCode::kMalformedRecord, where + ": body is empty");
    }
    if (!seen.insert(doc.doc_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  where + ": duplicate doc_id '" + doc.doc_id + "'");
    }
    documents.push_back(std::move(doc));
  }
  return Corpus::from_documents(std::move(documents), min_chars);
}

Corpus load_corpus(const std::filesystem::path& path, std::size_t min_chars) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open corpus file " + path.string());
  }
  return parse_corpus(in, min_chars);
}

}  // namespace rrqa
