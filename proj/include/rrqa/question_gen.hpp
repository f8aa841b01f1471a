#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rrqa/adapter.hpp"
#include "rrqa/corpus.hpp"
#include "rrqa/entity.hpp"

namespace rrqa {

struct GeneratedQuestion {
  std::string question_id;
  std::string text;
  std::string mention_id;
  std::string source_passage_id;

  bool operator==(const GeneratedQuestion&) const = default;
};

/// PERSON_ORG -> "who", LOCATION -> "where", OTHER -> "what".
std::string_view question_word(EntityType type);

/// What a generator sees of a mention: the sentence holding it, with the
/// mention's offsets rebased onto that sentence.
struct MentionContext {
  std::string sentence;
  std::size_t mention_begin = 0;
  std::size_t mention_end = 0;
};

/// Throws kInvalidArgument when the mention is not inside `passage` and
/// kDegenerateContext when the mention spans a sentence terminator.
MentionContext mention_context(const EntityMention& mention,
                               const Passage& passage);

class QuestionGenerator {
 public:
  virtual ~QuestionGenerator() = default;

  /// Returns the question text for one mention.
  virtual std::string generate_text(const EntityMention& mention,
                                    const Passage& passage) const = 0;
};

/// Masks the mention with its type's question word, fronts the question word
/// and ends with "?". "Chicago Bears defeated the Patriots." with mention
/// "Chicago Bears" gives "who defeated the Patriots?".
class TemplateQuestionGenerator final : public QuestionGenerator {
 public:
  std::string generate_text(const EntityMention& mention,
                            const Passage& passage) const override;
};

/// Delegates to an external generator speaking
/// {"mention_surface", "sentence", "entity_type"} -> {"question_text"}.
class AdapterQuestionGenerator final : public QuestionGenerator {
 public:
  explicit AdapterQuestionGenerator(std::shared_ptr<LineChannel> channel)
      : channel_(std::move(channel)) {}

  std::string generate_text(const EntityMention& mention,
                            const Passage& passage) const override;

 private:
  std::shared_ptr<LineChannel> channel_;
};

/// Template generation of a full GeneratedQuestion record.
GeneratedQuestion generate(const EntityMention& mention, const Passage& passage);

GeneratedQuestion generate(const EntityMention& mention, const Passage& passage,
                           const QuestionGenerator& generator);

struct GenerationResult {
  std::vector<GeneratedQuestion> questions;
  /// Mentions skipped because their context crossed a sentence boundary.
  std::vector<std::string> degenerate_mention_ids;

  std::size_t degenerate_count() const { return degenerate_mention_ids.size(); }
};

/// One question per mention, in table order. Degenerate contexts are counted,
/// not fatal; a mention whose passage is missing throws kIntegrity.
GenerationResult generate_all(const CandidateAnswerTable& candidates,
                              const Corpus& corpus,
                              const QuestionGenerator& generator);

GenerationResult generate_all(const CandidateAnswerTable& candidates,
                              const Corpus& corpus);

}  // namespace rrqa
