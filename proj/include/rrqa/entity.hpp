#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rrqa/corpus.hpp"

namespace rrqa {

enum class EntityType { kPersonOrg, kLocation, kOther };

inline constexpr EntityType kAllEntityTypes[] = {
    EntityType::kPersonOrg, EntityType::kLocation, EntityType::kOther};

/// "PERSON_ORG", "LOCATION", "OTHER".
std::string_view to_string(EntityType type);
EntityType parse_entity_type(std::string_view name);

inline constexpr double kDefaultEntityThreshold = 0.2;

struct AnnotatorConfig {
  double threshold = kDefaultEntityThreshold;

  void validate() const;
};

struct GazetteerEntry {
  std::vector<std::string> surface_tokens;
  std::string canonical_id;
  std::string canonical_name;
  EntityType entity_type = EntityType::kOther;
  double score = 1.0;
};

/// One occurrence of a linked entity. Offsets are byte offsets into the
/// passage text and `surface` is that slice. `occurrence_index` is the 1-based
/// position among all mentions of the same canonical_id in corpus order; it is
/// zero until the mention is placed in a CandidateAnswerTable.
struct EntityMention {
  std::string mention_id;
  std::string canonical_id;
  std::string canonical_name;
  EntityType entity_type = EntityType::kOther;
  double score = 0.0;
  std::string passage_id;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string surface;
  std::size_t occurrence_index = 0;

  bool operator==(const EntityMention&) const = default;
};

/// Anything that turns a passage into entity mentions.
class EntityAnnotator {
 public:
  virtual ~EntityAnnotator() = default;
  virtual std::vector<EntityMention> annotate(const Passage& passage) const = 0;
};

/// Leftmost-first, longest-match lookup of gazetteer surfaces over the token
/// stream. Entries scoring below the threshold never match, so a shorter
/// entry can win where a longer one was filtered.
class GazetteerAnnotator final : public EntityAnnotator {
 public:
  GazetteerAnnotator(const std::vector<GazetteerEntry>& gazetteer,
                     AnnotatorConfig config);

  std::vector<EntityMention> annotate(const Passage& passage) const override;

  std::size_t entry_count() const { return entries_.size(); }

 private:
  struct Node {
    std::unordered_map<std::string, std::size_t> children;
    std::ptrdiff_t entry = -1;
  };

  std::vector<GazetteerEntry> entries_;
  std::vector<Node> nodes_;
  AnnotatorConfig config_;
};

std::vector<EntityMention> annotate(const Passage& passage,
                                    const std::vector<GazetteerEntry>& gazetteer,
                                    const AnnotatorConfig& config);

/// Line-delimited {"surface", "canonical_id", "canonical_name",
/// "entity_type", "score"} records.
std::vector<GazetteerEntry> parse_gazetteer(std::istream& in);
std::vector<GazetteerEntry> load_gazetteer(const std::filesystem::path& path);

/// Node set A: every mention in the corpus, grouped by canonical entity.
class CandidateAnswerTable {
 public:
  CandidateAnswerTable() = default;

  /// `mentions` must be in corpus order; occurrence indices are (re)assigned.
  /// Throws kDuplicateId when two mentions share a mention_id.
  static CandidateAnswerTable from_mentions(std::vector<EntityMention> mentions);

  const std::vector<EntityMention>& mentions() const { return mentions_; }

  /// canonical_id -> positions in mentions(), in occurrence order.
  const std::map<std::string, std::vector<std::size_t>>& by_answer() const {
    return by_answer_;
  }

  const EntityMention* find(std::string_view mention_id) const;

  std::size_t answer_count() const { return by_answer_.size(); }
  std::size_t mention_count() const { return mentions_.size(); }
  bool empty() const { return mentions_.empty(); }

 private:
  std::vector<EntityMention> mentions_;
  std::map<std::string, std::vector<std::size_t>> by_answer_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

CandidateAnswerTable collect_candidate_answers(const Corpus& corpus,
                                               const EntityAnnotator& annotator);

}  // namespace rrqa
