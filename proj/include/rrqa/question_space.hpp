#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rrqa/entity.hpp"
#include "rrqa/question_gen.hpp"

namespace rrqa {

inline constexpr int kSpaceFormatVersion = 1;

/// One edge of the QA Space: an answer occurrence and the question generated
/// from its context.
struct QAPair {
  std::string pair_id;
  EntityMention answer;
  GeneratedQuestion question;

  bool operator==(const QAPair&) const = default;
};

class QASpace {
 public:
  QASpace() = default;

  /// One pair per question, in question order. Throws kIntegrity when a
  /// question's mention is missing from `candidates` or a mention is used twice.
  static QASpace build(const std::vector<GeneratedQuestion>& questions,
                       const CandidateAnswerTable& candidates,
                       std::string corpus_fingerprint = {});

  /// Validates the bipartite invariants and rebuilds the answer index.
  static QASpace from_pairs(std::vector<QAPair> pairs,
                            std::string corpus_fingerprint = {});

  const std::vector<QAPair>& pairs() const { return pairs_; }
  const QAPair& pair(std::size_t position) const { return pairs_[position]; }

  /// canonical_id -> pair positions, in pair order.
  const std::map<std::string, std::vector<std::size_t>>& answer_index() const {
    return answer_index_;
  }

  const std::string& corpus_fingerprint() const { return corpus_fingerprint_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  bool operator==(const QASpace& other) const {
    return pairs_ == other.pairs_ &&
           corpus_fingerprint_ == other.corpus_fingerprint_;
  }

 private:
  std::vector<QAPair> pairs_;
  std::map<std::string, std::vector<std::size_t>> answer_index_;
  std::string corpus_fingerprint_;
};

/// A distinct answer and every question generated for it, in occurrence order.
struct QSetAPair {
  std::string answer_id;
  std::string canonical_name;
  EntityType entity_type = EntityType::kOther;
  std::vector<std::string> questions;

  bool operator==(const QSetAPair&) const = default;
};

struct QSetASpace {
  /// Keyed and iterated by answer_id.
  std::map<std::string, QSetAPair> pairs;
  std::string corpus_fingerprint;

  std::size_t question_count() const;
  bool empty() const { return pairs.empty(); }

  bool operator==(const QSetASpace&) const = default;
};

QSetASpace aggregate_questions(const QASpace& qa);

enum class SpaceKind { kQA, kQSetA };

void write_qa_space(std::ostream& out, const QASpace& space);
QASpace read_qa_space(std::istream& in);
void save_space(const std::filesystem::path& path, const QASpace& space);
QASpace load_qa_space(const std::filesystem::path& path);

void write_qsa_space(std::ostream& out, const QSetASpace& space);
QSetASpace read_qsa_space(std::istream& in);
void save_space(const std::filesystem::path& path, const QSetASpace& space);
QSetASpace load_qsa_space(const std::filesystem::path& path);

/// Reads only the header line.
SpaceKind peek_space_kind(const std::filesystem::path& path);

}  // namespace rrqa
