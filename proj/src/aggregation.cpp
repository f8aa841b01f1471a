#include "rrqa/aggregation.hpp"

#include <map>

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

std::string normalize_answer(std::string_view text) {
  std::string out;
  for (const auto& term : tokenize_terms(text)) {
    if (term == "a" || term == "an" || term == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += term;
  }
  return out;
}

std::string majority_vote(std::span<const std::string> answers) {
  if (answers.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot vote over an empty answer list");
  }
  struct Group {
    std::size_t count = 0;
    std::size_t position_sum = 0;
    std::size_t first = 0;
  };
  std::map<std::string, Group> groups;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    auto [it, inserted] = groups.try_emplace(normalize_answer(answers[i]));
    if (inserted) it->second.first = i;
    ++it->second.count;
    it->second.position_sum += i + 1;
  }
  // Iterating the map in key order makes "first strictly better" pick the
  // lexicographically smallest form among full ties.
  const std::pair<const std::string, Group>* best = nullptr;
  for (const auto& entry : groups) {
    if (best == nullptr) {
      best = &entry;
      continue;
    }
    const Group& g = entry.second;
    const Group& b = best->second;
    if (g.count != b.count) {
      if (g.count > b.count) best = &entry;
      continue;
    }
    // Compare means without division: sum_g / count <  sum_b / count.
    if (g.position_sum < b.position_sum) best = &entry;
  }
  return answers[best->second.first];
}

std::string_view to_string(AnswerSource source) {
  switch (source) {
    case AnswerSource::kRetrieverReader: return "RETRIEVER_READER";
    case AnswerSource::kReaderRetrieverQSetA: return "READER_RETRIEVER_QSA";
  }
  return "READER_RETRIEVER_QSA";
}

FinalAnswer aggregate_final(const std::optional<AnswerSpan>& answer1,
                            std::span<const RetrievedAnswer> answer2,
                            const AggregatedAnswer& answer3) {
  FinalAnswer final;
  final.answer3 = answer3.canonical_name;
  for (const auto& entry : answer2) {
    final.answer2_list.push_back(entry.answer.canonical_name);
  }
  if (!final.answer2_list.empty()) {
    final.voted_answer2 = majority_vote(final.answer2_list);
  }

  bool consistent = false;
  if (answer1) {
    final.answer1 = answer1->text;
    const std::string wanted = normalize_answer(answer1->text);
    for (const auto& entry : answer2) {
      if (normalize_answer(entry.answer.canonical_name) == wanted ||
          normalize_answer(entry.answer.surface) == wanted) {
        consistent = true;
        break;
      }
    }
  }
  if (consistent) {
    final.text = answer1->text;
    final.source = AnswerSource::kRetrieverReader;
  } else {
    final.text = answer3.canonical_name;
    final.source = AnswerSource::kReaderRetrieverQSetA;
  }
  return final;
}

nlohmann::json to_json(const FinalAnswer& answer) {
  nlohmann::json out{
      {"text", answer.text},
      {"source", std::string(to_string(answer.source))},
      {"answer1", answer.answer1 ? nlohmann::json(*answer.answer1) : nullptr},
      {"answer2_list", answer.answer2_list},
      {"answer3", answer.answer3},
      {"voted_answer2",
       answer.voted_answer2 ? nlohmann::json(*answer.voted_answer2) : nullptr},
  };
  return out;
}

}  // namespace rrqa
