#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "rrqa/adapter.hpp"
#include "rrqa/corpus.hpp"
#include "rrqa/entity.hpp"

namespace rrqa {

/// Answer 1: a verbatim span of the retrieved passage.
struct AnswerSpan {
  std::string text;
  std::string passage_id;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  double score = 0.0;

  bool operator==(const AnswerSpan&) const = default;
};

/// Reads one passage for one question. Throws Error(kNoAnswer) when the
/// passage offers no candidate span.
class Reader {
 public:
  virtual ~Reader() = default;

  /// `mentions` are the passage's entity annotations; readers that extract
  /// spans on their own may ignore them.
  virtual AnswerSpan read(std::string_view question, const Passage& passage,
                          std::span<const EntityMention> mentions) const = 0;
};

/// Tokens never counted toward sentence overlap.
bool is_reader_stopword(std::string_view token);

/// Picks the mention whose sentence shares the most distinct non-stopword
/// question tokens (tokens of the mention itself excluded); the earliest
/// mention wins ties.
class LexicalReader final : public Reader {
 public:
  AnswerSpan read(std::string_view question, const Passage& passage,
                  std::span<const EntityMention> mentions) const override;
};

AnswerSpan builtin_read(std::string_view question, const Passage& passage,
                        std::span<const EntityMention> mentions);

/// External reader over {"question", "passage_text"} ->
/// {"answer_text", "char_start", "char_end", "score"}. Offsets are byte
/// offsets into passage_text; an empty answer_text means no answer.
class AdapterReader final : public Reader {
 public:
  explicit AdapterReader(std::shared_ptr<LineChannel> channel)
      : channel_(std::move(channel)) {}

  AnswerSpan read(std::string_view question, const Passage& passage,
                  std::span<const EntityMention> mentions) const override;

 private:
  std::shared_ptr<LineChannel> channel_;
};

}  // namespace rrqa
