#pragma once

// Line-delimited record files with a leading header line:
//   {"format_version", "kind", "corpus_fingerprint", "pair_count", "checksum"}
// The checksum is FNV-1a over every record line including its newline.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace rrqa::detail {

struct RecordFile {
  std::string fingerprint;
  std::vector<nlohmann::json> records;
};

void write_record_file(std::ostream& out, const std::string& kind,
                       const std::string& fingerprint,
                       const std::vector<nlohmann::json>& records);

/// Throws kVersionMismatch, kMalformedRecord (bad line, wrong kind, record
/// count differs from the header) or kChecksumMismatch.
RecordFile read_record_file(std::istream& in, const std::string& kind);

/// Header only.
nlohmann::json read_record_header(std::istream& in);

/// Runs `fn(record)`, converting json/type errors into kMalformedRecord that
/// names the 1-based record number.
template <typename Fn>
auto decode_record(const nlohmann::json& record, std::size_t index, Fn&& fn);

}  // namespace rrqa::detail

#include "rrqa/errors.hpp"

namespace rrqa::detail {

template <typename Fn>
auto decode_record(const nlohmann::json& record, std::size_t index, Fn&& fn) {
  try {
    return fn(record);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                "record " + std::to_string(index + 1) + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedRecord) throw;
    throw Error(ErrorCode::kMalformedRecord,
                "record " + std::to_string(index + 1) + ": " + e.what());
  }
}

}  // namespace rrqa::detail
