#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rrqa/entity.hpp"

namespace rrqa {

struct EvalItem {
  std::string question;
  std::vector<std::string> gold_answers;
  std::optional<EntityType> answer_type;
};

/// True iff the normalized prediction equals some normalized gold alias.
/// Throws kInvalidArgument when `gold` is empty.
bool exact_match(std::string_view predicted, std::span<const std::string> gold);

/// A workflow under evaluation: question in, answer text out. Throwing counts
/// as a wrong answer.
struct NamedSystem {
  std::string name;
  std::function<std::string(const std::string&)> answer;
};

struct Tally {
  std::size_t n = 0;
  std::size_t correct = 0;

  double accuracy() const {
    return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
  }
  bool operator==(const Tally&) const = default;
};

struct SystemScore {
  Tally overall;
  /// Only types present in the dataset appear.
  std::map<EntityType, Tally> per_type;
};

struct ItemOutcome {
  std::string system;
  std::size_t item = 0;
  std::optional<std::string> prediction;
  bool correct = false;
  std::string error;
};

struct EvalReport {
  std::vector<std::string> system_order;
  std::map<std::string, SystemScore> per_system;
  std::vector<ItemOutcome> outcomes;
};

/// Throws kEmptyInput on an empty dataset.
EvalReport evaluate(const std::vector<NamedSystem>& systems,
                    const std::vector<EvalItem>& dataset);

/// {"question", "gold_answers": [...], "answer_type"?} per line; errors cite
/// the 1-based line number.
std::vector<EvalItem> parse_dataset(std::istream& in);
std::vector<EvalItem> load_dataset(const std::filesystem::path& path);

nlohmann::json to_json(const EvalReport& report);
/// Fixed-width table: system, overall, one column per answer type.
std::string format_report(const EvalReport& report);

}  // namespace rrqa
