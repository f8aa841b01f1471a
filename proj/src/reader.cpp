#include "rrqa/reader.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

constexpr std::array<std::string_view, 16> kStopwords = {
    "a",  "an",    "the",   "of",    "in",    "on",  "who", "what",
    "where", "when", "which", "is", "was", "did", "do", "to"};

}  // namespace

bool is_reader_stopword(std::string_view token) {
  return std::find(kStopwords.begin(), kStopwords.end(), token) !=
         kStopwords.end();
}

AnswerSpan LexicalReader::read(std::string_view question,
                               const Passage& passage,
                               std::span<const EntityMention> mentions) const {
  if (mentions.empty()) {
    throw Error(ErrorCode::kNoAnswer,
                "passage '" + passage.passage_id + "' has no candidate answers");
  }
  std::set<std::string> question_terms;
  for (auto& term : tokenize_terms(question)) {
    if (!is_reader_stopword(term)) question_terms.insert(std::move(term));
  }

  std::vector<const EntityMention*> ordered;
  for (const auto& mention : mentions) {
    if (mention.passage_id != passage.passage_id ||
        mention.char_end > passage.text.size() ||
        mention.char_start >= mention.char_end) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mention '" + mention.mention_id +
                      "' does not lie in passage '" + passage.passage_id + "'");
    }
    ordered.push_back(&mention);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const EntityMention* lhs, const EntityMention* rhs) {
                     return lhs->char_start < rhs->char_start;
                   });

  const EntityMention* best = nullptr;
  std::size_t best_score = 0;
  for (const EntityMention* mention : ordered) {
    const auto mention_terms = tokenize_terms(mention->surface);
    const Span sentence = enclosing_sentence(
        passage.text, Span{mention->char_start, mention->char_end});
    std::set<std::string> sentence_terms;
    for (auto& term : tokenize_terms(std::string_view(passage.text)
                                         .substr(sentence.begin, sentence.size()))) {
      if (std::find(mention_terms.begin(), mention_terms.end(), term) ==
          mention_terms.end()) {
        sentence_terms.insert(std::move(term));
      }
    }
    std::size_t score = 0;
    for (const auto& term : question_terms) score += sentence_terms.count(term);
    if (best == nullptr || score > best_score) {
      best = mention;
      best_score = score;
    }
  }
  return AnswerSpan{best->surface, passage.passage_id, best->char_start,
                    best->char_end, static_cast<double>(best_score)};
}

AnswerSpan builtin_read(std::string_view question, const Passage& passage,
                        std::span<const EntityMention> mentions) {
  return LexicalReader{}.read(question, passage, mentions);
}

AnswerSpan AdapterReader::read(std::string_view question, const Passage& passage,
                               std::span<const EntityMention>) const {
  const auto response = exchange_json(
      *channel_, {{"question", std::string(question)},
                  {"passage_text", passage.text}});
  AnswerSpan span;
  try {
    span.text = response.at("answer_text").get<std::string>();
    if (span.text.empty()) {
      throw Error(ErrorCode::kNoAnswer,
                  "reader found no answer in passage '" + passage.passage_id + "'");
    }
    span.char_start = response.at("char_start").get<std::size_t>();
    span.char_end = response.at("char_end").get<std::size_t>();
    span.score = response.value("score", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kAdapter,
                std::string("reader response malformed: ") + e.what());
  }
  if (span.char_end <= span.char_start || span.char_end > passage.text.size() ||
      passage.text.compare(span.char_start, span.char_end - span.char_start,
                           span.text) != 0) {
    throw Error(ErrorCode::kAdapter,
                "reader answer '" + span.text +
                    "' is not the passage slice at its offsets");
  }
  span.passage_id = passage.passage_id;
  return span;
}

}  // namespace rrqa
