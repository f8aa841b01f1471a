#include "record_file.hpp"

#include <istream>
#include <ostream>

#include "rrqa/question_space.hpp"
#include "rrqa/text.hpp"

namespace rrqa::detail {

namespace {

using nlohmann::json;

json parse_line(const std::string& line, std::size_t line_number) {
  try {
    auto value = json::parse(line);
    if (!value.is_object()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "line " + std::to_string(line_number) +
                      ": record is not an object");
    }
    return value;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRecord,
                "line " + std::to_string(line_number) + ": " + e.what());
  }
}

}  // namespace

void write_record_file(std::ostream& out, const std::string& kind,
                       const std::string& fingerprint,
                       const std::vector<json>& records) {
  std::vector<std::string> lines;
  lines.reserve(records.size());
  std::uint64_t checksum = fnv1a64("");
  for (const auto& record : records) {
    lines.push_back(record.dump());
    checksum = fnv1a64(lines.back(), checksum);
    checksum = fnv1a64("\n", checksum);
  }
  const json header{
      {"format_version", kSpaceFormatVersion},
      {"kind", kind},
      {"corpus_fingerprint", fingerprint},
      {"pair_count", records.size()},
      {"checksum", to_hex(checksum)},
  };
  out << header.dump() << '\n';
  for (const auto& line : lines) out << line << '\n';
}

json read_record_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedRecord, "file is empty");
  }
  return parse_line(line, 1);
}

RecordFile read_record_file(std::istream& in, const std::string& kind) {
  const json header = read_record_header(in);
  std::size_t expected = 0;
  std::string checksum;
  RecordFile file;
  try {
    const int version = header.at("format_version").get<int>();
    if (version != kSpaceFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kSpaceFormatVersion) + ")");
    }
    const auto found_kind = header.at("kind").get<std::string>();
    if (found_kind != kind) {
      throw Error(ErrorCode::kMalformedRecord,
                  "file holds '" + found_kind + "', expected '" + kind + "'");
    }
    file.fingerprint = header.at("corpus_fingerprint").get<std::string>();
    expected = header.at("pair_count").get<std::size_t>();
    checksum = header.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("header: ") + e.what());
  }

  std::uint64_t actual = fnv1a64("");
  std::string line;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    file.records.push_back(parse_line(line, line_number));
    actual = fnv1a64(line, actual);
    actual = fnv1a64("\n", actual);
  }
  if (file.records.size() != expected) {
    throw Error(ErrorCode::kMalformedRecord,
                "file truncated or padded: header declares " +
                    std::to_string(expected) + " records, found " +
                    std::to_string(file.records.size()));
  }
  if (to_hex(actual) != checksum) {
    throw Error(ErrorCode::kChecksumMismatch,
                "checksum " + to_hex(actual) + " does not match header " +
                    checksum);
  }
  return file;
}

}  // namespace rrqa::detail
