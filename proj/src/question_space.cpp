#include "rrqa/question_space.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"
#include "record_file.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

using nlohmann::json;

constexpr const char* kQAKind = "qa_space";
constexpr const char* kQSetAKind = "qsa_space";

json qa_record(const QAPair& pair) {
  const auto& a = pair.answer;
  return json{
      {"pair_id", pair.pair_id},
      {"answer_canonical_id", a.canonical_id},
      {"answer_canonical_name", a.canonical_name},
      {"entity_type", std::string(to_string(a.entity_type))},
      {"occurrence_index", a.occurrence_index},
      {"passage_id", a.passage_id},
      {"char_start", a.char_start},
      {"char_end", a.char_end},
      {"question_text", pair.question.text},
      {"answer_surface", a.surface},
      {"mention_id", a.mention_id},
      {"mention_score", a.score},
      {"question_id", pair.question.question_id},
  };
}

QAPair qa_from_record(const json& r) {
  QAPair pair;
  pair.pair_id = r.at("pair_id").get<std::string>();
  auto& a = pair.answer;
  a.canonical_id = r.at("answer_canonical_id").get<std::string>();
  a.canonical_name = r.at("answer_canonical_name").get<std::string>();
  a.entity_type = parse_entity_type(r.at("entity_type").get<std::string>());
  a.occurrence_index = r.at("occurrence_index").get<std::size_t>();
  a.passage_id = r.at("passage_id").get<std::string>();
  a.char_start = r.at("char_start").get<std::size_t>();
  a.char_end = r.at("char_end").get<std::size_t>();
  a.surface = r.at("answer_surface").get<std::string>();
  a.mention_id = r.at("mention_id").get<std::string>();
  a.score = r.at("mention_score").get<double>();
  pair.question.text = r.at("question_text").get<std::string>();
  pair.question.question_id = r.at("question_id").get<std::string>();
  pair.question.mention_id = a.mention_id;
  pair.question.source_passage_id = a.passage_id;
  return pair;
}

json qsa_record(const QSetAPair& pair) {
  return json{
      {"answer_id", pair.answer_id},
      {"canonical_name", pair.canonical_name},
      {"entity_type", std::string(to_string(pair.entity_type))},
      {"questions", pair.questions},
  };
}

QSetAPair qsa_from_record(const json& r) {
  QSetAPair pair;
  pair.answer_id = r.at("answer_id").get<std::string>();
  pair.canonical_name = r.at("canonical_name").get<std::string>();
  pair.entity_type = parse_entity_type(r.at("entity_type").get<std::string>());
  pair.questions = r.at("questions").get<std::vector<std::string>>();
  if (pair.questions.empty()) {
    throw Error(ErrorCode::kMalformedRecord,
                "answer '" + pair.answer_id + "' has no questions");
  }
  return pair;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

QASpace QASpace::build(const std::vector<GeneratedQuestion>& questions,
                       const CandidateAnswerTable& candidates,
                       std::string corpus_fingerprint) {
  std::vector<QAPair> pairs;
  pairs.reserve(questions.size());
  for (const auto& question : questions) {
    const EntityMention* mention = candidates.find(question.mention_id);
    if (mention == nullptr) {
      throw Error(ErrorCode::kIntegrity,
                  "question '" + question.question_id +
                      "' refers to unknown mention '" + question.mention_id + "'");
    }
    QAPair pair;
    pair.pair_id = "qa" + std::to_string(pairs.size());
    pair.answer = *mention;
    pair.question = question;
    pairs.push_back(std::move(pair));
  }
  return from_pairs(std::move(pairs), std::move(corpus_fingerprint));
}

QASpace QASpace::from_pairs(std::vector<QAPair> pairs,
                            std::string corpus_fingerprint) {
  QASpace space;
  std::unordered_set<std::string> pair_ids;
  std::unordered_set<std::string> mention_ids;
  std::unordered_set<std::string> question_ids;
  for (std::size_t pos = 0; pos < pairs.size(); ++pos) {
    const auto& pair = pairs[pos];
    if (pair.question.mention_id != pair.answer.mention_id) {
      throw Error(ErrorCode::kIntegrity,
                  "pair '" + pair.pair_id + "' joins question of mention '" +
                      pair.question.mention_id + "' to answer mention '" +
                      pair.answer.mention_id + "'");
    }
    if (!pair_ids.insert(pair.pair_id).second ||
        !mention_ids.insert(pair.answer.mention_id).second ||
        !question_ids.insert(pair.question.question_id).second) {
      throw Error(ErrorCode::kIntegrity,
                  "pair '" + pair.pair_id +
                      "' repeats a pair id, answer occurrence or question");
    }
    space.answer_index_[pair.answer.canonical_id].push_back(pos);
  }
  space.pairs_ = std::move(pairs);
  space.corpus_fingerprint_ = std::move(corpus_fingerprint);
  return space;
}

std::size_t QSetASpace::question_count() const {
  std::size_t total = 0;
  for (const auto& [id, pair] : pairs) total += pair.questions.size();
  return total;
}

QSetASpace aggregate_questions(const QASpace& qa) {
  QSetASpace out;
  out.corpus_fingerprint = qa.corpus_fingerprint();
  for (const auto& [answer_id, positions] : qa.answer_index()) {
    std::vector<std::size_t> ordered = positions;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](std::size_t lhs, std::size_t rhs) {
                       return qa.pair(lhs).answer.occurrence_index <
                              qa.pair(rhs).answer.occurrence_index;
                     });
    QSetAPair entry;
    const auto& first = qa.pair(ordered.front()).answer;
    entry.answer_id = answer_id;
    entry.canonical_name = first.canonical_name;
    entry.entity_type = first.entity_type;
    entry.questions.reserve(ordered.size());
    for (std::size_t pos : ordered) {
      entry.questions.push_back(qa.pair(pos).question.text);
    }
    out.pairs.emplace(answer_id, std::move(entry));
  }
  return out;
}

void write_qa_space(std::ostream& out, const QASpace& space) {
  std::vector<json> records;
  records.reserve(space.size());
  for (const auto& pair : space.pairs()) records.push_back(qa_record(pair));
  detail::write_record_file(out, kQAKind, space.corpus_fingerprint(), records);
}

QASpace read_qa_space(std::istream& in) {
  auto raw = detail::read_record_file(in, kQAKind);
  std::vector<QAPair> pairs;
  pairs.reserve(raw.records.size());
  for (std::size_t i = 0; i < raw.records.size(); ++i) {
    pairs.push_back(detail::decode_record(raw.records[i], i, qa_from_record));
  }
  return QASpace::from_pairs(std::move(pairs), std::move(raw.fingerprint));
}

void write_qsa_space(std::ostream& out, const QSetASpace& space) {
  std::vector<json> records;
  records.reserve(space.pairs.size());
  for (const auto& [id, pair] : space.pairs) records.push_back(qsa_record(pair));
  detail::write_record_file(out, kQSetAKind, space.corpus_fingerprint, records);
}

QSetASpace read_qsa_space(std::istream& in) {
  auto raw = detail::read_record_file(in, kQSetAKind);
  QSetASpace space;
  space.corpus_fingerprint = std::move(raw.fingerprint);
  for (std::size_t i = 0; i < raw.records.size(); ++i) {
    auto pair = detail::decode_record(raw.records[i], i, qsa_from_record);
    const std::string id = pair.answer_id;
    if (!space.pairs.emplace(id, std::move(pair)).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  "record " + std::to_string(i + 1) +
                      ": duplicate answer_id '" + id + "'");
    }
  }
  return space;
}

void save_space(const std::filesystem::path& path, const QASpace& space) {
  auto out = open_for_write(path);
  write_qa_space(out, space);
}

void save_space(const std::filesystem::path& path, const QSetASpace& space) {
  auto out = open_for_write(path);
  write_qsa_space(out, space);
}

QASpace load_qa_space(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_qa_space(in);
}

QSetASpace load_qsa_space(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_qsa_space(in);
}

SpaceKind peek_space_kind(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const json header = detail::read_record_header(in);
  const auto kind = header.value("kind", std::string{});
  if (kind == kQAKind) return SpaceKind::kQA;
  if (kind == kQSetAKind) return SpaceKind::kQSetA;
  throw Error(ErrorCode::kMalformedRecord,
              path.string() + " is not a question space file");
}

}  // namespace rrqa
