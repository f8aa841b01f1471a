#include "rrqa/entity.hpp"

#include <fstream>
#include <istream>

#include "json.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::kPersonOrg: return "PERSON_ORG";
    case EntityType::kLocation: return "LOCATION";
    case EntityType::kOther: return "OTHER";
  }
  return "OTHER";
}

EntityType parse_entity_type(std::string_view name) {
  for (EntityType type : kAllEntityTypes) {
    if (to_string(type) == name) return type;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown entity type '" + std::string(name) +
                  "' (expected PERSON_ORG, LOCATION or OTHER)");
}

void AnnotatorConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "entity threshold must lie in [0, 1]");
  }
}

GazetteerAnnotator::GazetteerAnnotator(
    const std::vector<GazetteerEntry>& gazetteer, AnnotatorConfig config)
    : config_(config) {
  config_.validate();
  nodes_.emplace_back();
  for (const auto& entry : gazetteer) {
    if (entry.surface_tokens.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "gazetteer entry '" + entry.canonical_id + "' has no tokens");
    }
    if (entry.score < config_.threshold) continue;
    std::size_t node = 0;
    for (const auto& token : entry.surface_tokens) {
      auto it = nodes_[node].children.find(token);
      if (it == nodes_[node].children.end()) {
        nodes_.emplace_back();
        it = nodes_[node].children.emplace(token, nodes_.size() - 1).first;
      }
      node = it->second;
    }
    auto& slot = nodes_[node].entry;
    if (slot >= 0) {
      // Same surface listed twice: highest score, then smallest id.
      const auto& held = entries_[static_cast<std::size_t>(slot)];
      const bool better =
          entry.score > held.score ||
          (entry.score == held.score && entry.canonical_id < held.canonical_id);
      if (!better) continue;
      entries_[static_cast<std::size_t>(slot)] = entry;
    } else {
      slot = static_cast<std::ptrdiff_t>(entries_.size());
      entries_.push_back(entry);
    }
  }
}

std::vector<EntityMention> GazetteerAnnotator::annotate(
    const Passage& passage) const {
  std::vector<EntityMention> mentions;
  const auto tokens = tokenize(passage.text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t node = 0;
    std::ptrdiff_t best_entry = -1;
    std::size_t best_end = i;
    for (std::size_t j = i; j < tokens.size(); ++j) {
      auto it = nodes_[node].children.find(tokens[j].surface);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (nodes_[node].entry >= 0) {
        best_entry = nodes_[node].entry;
        best_end = j + 1;
      }
    }
    if (best_entry < 0) {
      ++i;
      continue;
    }
    const auto& entry = entries_[static_cast<std::size_t>(best_entry)];
    EntityMention mention;
    mention.char_start = tokens[i].char_start;
    mention.char_end = tokens[best_end - 1].char_end;
    mention.mention_id =
        passage.passage_id + "@" + std::to_string(mention.char_start);
    mention.canonical_id = entry.canonical_id;
    mention.canonical_name = entry.canonical_name;
    mention.entity_type = entry.entity_type;
    mention.score = entry.score;
    mention.passage_id = passage.passage_id;
    mention.surface = passage.text.substr(
        mention.char_start, mention.char_end - mention.char_start);
    mentions.push_back(std::move(mention));
    i = best_end;
  }
  return mentions;
}

std::vector<EntityMention> annotate(const Passage& passage,
                                    const std::vector<GazetteerEntry>& gazetteer,
                                    const AnnotatorConfig& config) {
  return GazetteerAnnotator(gazetteer, config).annotate(passage);
}

std::vector<GazetteerEntry> parse_gazetteer(std::istream& in) {
  std::vector<GazetteerEntry> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::string where = "gazetteer line " + std::to_string(line_number);
    try {
      const auto record = nlohmann::json::parse(line);
      GazetteerEntry entry;
      entry.surface_tokens =
          tokenize_terms(record.at("surface").get<std::string>());
      entry.canonical_id = record.at("canonical_id").get<std::string>();
      entry.canonical_name = record.at("canonical_name").get<std::string>();
      entry.entity_type =
          parse_entity_type(record.at("entity_type").get<std::string>());
      entry.score = record.at("score").get<double>();
      if (entry.surface_tokens.empty()) {
        throw Error(ErrorCode::kMalformedRecord,
                    where + ": surface has no tokens");
      }
      if (!(entry.score >= 0.0 && entry.score <= 1.0)) {
        throw Error(ErrorCode::kMalformedRecord,
                    where + ": score must lie in [0, 1]");
      }
      entries.push_back(std::move(entry));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, where + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMalformedRecord) throw;
      throw Error(ErrorCode::kMalformedRecord, where + ": " + e.what());
    }
  }
  return entries;
}

std::vector<GazetteerEntry> load_gazetteer(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open gazetteer file " + path.string());
  }
  return parse_gazetteer(in);
}

CandidateAnswerTable CandidateAnswerTable::from_mentions(
    std::vector<EntityMention> mentions) {
  CandidateAnswerTable table;
  table.mentions_ = std::move(mentions);
  for (std::size_t pos = 0; pos < table.mentions_.size(); ++pos) {
    auto& mention = table.mentions_[pos];
    if (!table.lookup_.emplace(mention.mention_id, pos).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate mention_id '" + mention.mention_id + "'");
    }
    auto& slots = table.by_answer_[mention.canonical_id];
    slots.push_back(pos);
    mention.occurrence_index = slots.size();
  }
  return table;
}

const EntityMention* CandidateAnswerTable::find(
    std::string_view mention_id) const {
  auto it = lookup_.find(std::string(mention_id));
  return it == lookup_.end() ? nullptr : &mentions_[it->second];
}

CandidateAnswerTable collect_candidate_answers(const Corpus& corpus,
                                               const EntityAnnotator& annotator) {
  std::vector<EntityMention> all;
  for (const auto& passage : corpus.passages()) {
    auto found = annotator.annotate(passage);
    all.insert(all.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  }
  return CandidateAnswerTable::from_mentions(std::move(all));
}

}  // namespace rrqa
