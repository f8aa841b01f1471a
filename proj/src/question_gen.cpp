#include "rrqa/question_gen.hpp"

#include <cctype>

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

bool attaches_left(char c) {
  return c == ',' || c == ';' || c == ':' || c == ')' || c == '\'';
}

void append_part(std::string& out, const std::string& part) {
  if (part.empty()) return;
  if (!out.empty() && !attaches_left(part.front())) out.push_back(' ');
  out += part;
}

}  // namespace

std::string_view question_word(EntityType type) {
  switch (type) {
    case EntityType::kPersonOrg: return "who";
    case EntityType::kLocation: return "where";
    case EntityType::kOther: return "what";
  }
  return "what";
}

MentionContext mention_context(const EntityMention& mention,
                               const Passage& passage) {
  if (mention.passage_id != passage.passage_id ||
      mention.char_end > passage.text.size() ||
      mention.char_start >= mention.char_end) {
    throw Error(ErrorCode::kInvalidArgument,
                "mention '" + mention.mention_id + "' does not lie in passage '" +
                    passage.passage_id + "'");
  }
  const Span span{mention.char_start, mention.char_end};
  if (crosses_sentence_boundary(passage.text, span)) {
    throw Error(ErrorCode::kDegenerateContext,
                "mention '" + mention.mention_id +
                    "' crosses a sentence terminator");
  }
  const Span sentence = enclosing_sentence(passage.text, span);
  MentionContext context;
  context.sentence = passage.text.substr(sentence.begin, sentence.size());
  context.mention_begin = span.begin - sentence.begin;
  context.mention_end = span.end - sentence.begin;
  return context;
}

std::string TemplateQuestionGenerator::generate_text(
    const EntityMention& mention, const Passage& passage) const {
  const auto context = mention_context(mention, passage);
  const std::string_view sentence = context.sentence;
  std::string before =
      collapse_whitespace(sentence.substr(0, context.mention_begin));
  std::string after =
      collapse_whitespace(sentence.substr(context.mention_end));
  // The old sentence opening is no longer sentence-initial.
  if (!before.empty()) {
    before[0] = static_cast<char>(
        std::tolower(static_cast<unsigned char>(before[0])));
  }
  std::string question(question_word(mention.entity_type));
  append_part(question, before);
  append_part(question, after);
  question.push_back('?');
  return question;
}

std::string AdapterQuestionGenerator::generate_text(
    const EntityMention& mention, const Passage& passage) const {
  const auto context = mention_context(mention, passage);
  nlohmann::json request = {
      {"mention_surface", mention.surface},
      {"sentence", context.sentence},
      {"entity_type", std::string(to_string(mention.entity_type))},
  };
  const auto response = exchange_json(*channel_, request);
  if (!response.contains("question_text") ||
      !response["question_text"].is_string()) {
    throw Error(ErrorCode::kAdapter,
                "question generator response lacks string field question_text");
  }
  auto text = response["question_text"].get<std::string>();
  if (trim(text).empty()) {
    throw Error(ErrorCode::kAdapter,
                "question generator returned an empty question for '" +
                    mention.mention_id + "'");
  }
  return text;
}

GeneratedQuestion generate(const EntityMention& mention, const Passage& passage,
                           const QuestionGenerator& generator) {
  GeneratedQuestion question;
  question.text = generator.generate_text(mention, passage);
  question.question_id = "q:" + mention.mention_id;
  question.mention_id = mention.mention_id;
  question.source_passage_id = passage.passage_id;
  return question;
}

GeneratedQuestion generate(const EntityMention& mention,
                           const Passage& passage) {
  return generate(mention, passage, TemplateQuestionGenerator{});
}

GenerationResult generate_all(const CandidateAnswerTable& candidates,
                              const Corpus& corpus,
                              const QuestionGenerator& generator) {
  GenerationResult result;
  result.questions.reserve(candidates.mention_count());
  for (const auto& mention : candidates.mentions()) {
    const Passage* passage = corpus.find_passage(mention.passage_id);
    if (passage == nullptr) {
      throw Error(ErrorCode::kIntegrity,
                  "mention '" + mention.mention_id +
                      "' refers to unknown passage '" + mention.passage_id + "'");
    }
    try {
      result.questions.push_back(generate(mention, *passage, generator));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateContext) throw;
      result.degenerate_mention_ids.push_back(mention.mention_id);
    }
  }
  return result;
}

GenerationResult generate_all(const CandidateAnswerTable& candidates,
                              const Corpus& corpus) {
  return generate_all(candidates, corpus, TemplateQuestionGenerator{});
}

}  // namespace rrqa
