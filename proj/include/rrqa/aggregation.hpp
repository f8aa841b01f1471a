#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rrqa/reader.hpp"
#include "rrqa/retrieval.hpp"

namespace rrqa {

/// Case-fold, strip punctuation, drop the articles a/an/the, single-space.
/// Uses the shared tokenizer, so "U.S." normalizes to "u s".
std::string normalize_answer(std::string_view text);

/// Most frequent answer by normalized form. Equal counts go to the smaller
/// mean 1-based position, then to the lexicographically smaller normalized
/// form. Returns the first surface seen for the winning group.
/// Throws kEmptyInput on an empty list.
std::string majority_vote(std::span<const std::string> answers);

enum class AnswerSource { kRetrieverReader, kReaderRetrieverQSetA };

/// "RETRIEVER_READER" / "READER_RETRIEVER_QSA".
std::string_view to_string(AnswerSource source);

struct FinalAnswer {
  std::string text;
  AnswerSource source = AnswerSource::kReaderRetrieverQSetA;
  std::optional<std::string> answer1;
  /// Canonical names of {Answer 2}, best first.
  std::vector<std::string> answer2_list;
  std::string answer3;
  std::optional<std::string> voted_answer2;

  bool operator==(const FinalAnswer&) const = default;
};

/// Accept Answer 1 when its normalized text equals the normalized canonical
/// name or surface of some {Answer 2} entry; otherwise return Answer 3.
FinalAnswer aggregate_final(const std::optional<AnswerSpan>& answer1,
                            std::span<const RetrievedAnswer> answer2,
                            const AggregatedAnswer& answer3);

nlohmann::json to_json(const FinalAnswer& answer);

}  // namespace rrqa
