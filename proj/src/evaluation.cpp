#include "rrqa/evaluation.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "rrqa/aggregation.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

bool exact_match(std::string_view predicted, std::span<const std::string> gold) {
  if (gold.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "gold answer list is empty");
  }
  const std::string wanted = normalize_answer(predicted);
  for (const auto& alias : gold) {
    if (normalize_answer(alias) == wanted) return true;
  }
  return false;
}

EvalReport evaluate(const std::vector<NamedSystem>& systems,
                    const std::vector<EvalItem>& dataset) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyInput, "evaluation dataset has no items");
  }
  EvalReport report;
  for (const auto& system : systems) {
    report.system_order.push_back(system.name);
    auto& score = report.per_system[system.name];
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& item = dataset[i];
      ItemOutcome outcome;
      outcome.system = system.name;
      outcome.item = i;
      try {
        outcome.prediction = system.answer(item.question);
        outcome.correct = exact_match(*outcome.prediction, item.gold_answers);
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
      ++score.overall.n;
      score.overall.correct += outcome.correct ? 1 : 0;
      if (item.answer_type) {
        auto& tally = score.per_type[*item.answer_type];
        ++tally.n;
        tally.correct += outcome.correct ? 1 : 0;
      }
      report.outcomes.push_back(std::move(outcome));
    }
  }
  return report;
}

std::vector<EvalItem> parse_dataset(std::istream& in) {
  std::vector<EvalItem> items;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::string where = "dataset line " + std::to_string(line_number);
    try {
      const auto record = nlohmann::json::parse(line);
      EvalItem item;
      item.question = record.at("question").get<std::string>();
      item.gold_answers =
          record.at("gold_answers").get<std::vector<std::string>>();
      if (item.gold_answers.empty()) {
        throw Error(ErrorCode::kMalformedRecord, where + ": gold_answers is empty");
      }
      if (record.contains("answer_type") && !record["answer_type"].is_null()) {
        item.answer_type =
            parse_entity_type(record["answer_type"].get<std::string>());
      }
      items.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, where + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMalformedRecord) throw;
      throw Error(ErrorCode::kMalformedRecord, where + ": " + e.what());
    }
  }
  return items;
}

std::vector<EvalItem> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset " + path.string());
  return parse_dataset(in);
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json systems = nlohmann::json::array();
  for (const auto& name : report.system_order) {
    const auto& score = report.per_system.at(name);
    nlohmann::json per_type = nlohmann::json::object();
    for (const auto& [type, tally] : score.per_type) {
      per_type[std::string(to_string(type))] = {
          {"n", tally.n}, {"correct", tally.correct}, {"accuracy", tally.accuracy()}};
    }
    systems.push_back({{"system", name},
                       {"n", score.overall.n},
                       {"correct", score.overall.correct},
                       {"accuracy", score.overall.accuracy()},
                       {"per_type", per_type}});
  }
  nlohmann::json items = nlohmann::json::array();
  for (const auto& outcome : report.outcomes) {
    items.push_back({{"system", outcome.system},
                     {"item", outcome.item},
                     {"prediction", outcome.prediction
                                        ? nlohmann::json(*outcome.prediction)
                                        : nullptr},
                     {"correct", outcome.correct},
                     {"error", outcome.error}});
  }
  return {{"systems", systems}, {"items", items}};
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  char row[160];
  std::snprintf(row, sizeof row, "%-26s %8s %12s %10s %8s\n", "system",
                "overall", "PERSON_ORG", "LOCATION", "OTHER");
  out << row;
  for (const auto& name : report.system_order) {
    const auto& score = report.per_system.at(name);
    std::string cells[3];
    for (std::size_t t = 0; t < 3; ++t) {
      auto it = score.per_type.find(kAllEntityTypes[t]);
      cells[t] = "-";
      if (it != score.per_type.end()) {
        char cell[32];
        std::snprintf(cell, sizeof cell, "%.4f", it->second.accuracy());
        cells[t] = cell;
      }
    }
    std::snprintf(row, sizeof row, "%-26s %8.4f %12s %10s %8s\n", name.c_str(),
                  score.overall.accuracy(), cells[0].c_str(), cells[1].c_str(),
                  cells[2].c_str());
    out << row;
  }
  return out.str();
}

}  // namespace rrqa
