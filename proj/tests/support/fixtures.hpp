#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rrqa/corpus.hpp"
#include "rrqa/entity.hpp"
#include "rrqa/text.hpp"

namespace fixtures {

inline rrqa::Passage passage(const std::string& id, const std::string& text) {
  rrqa::Passage p;
  p.passage_id = id;
  p.doc_id = id.substr(0, id.find('#'));
  p.text = text;
  p.char_start = 0;
  p.char_end = text.size();
  return p;
}

/// Mention of the `nth` occurrence of `surface` in the passage.
inline rrqa::EntityMention mention(const rrqa::Passage& p,
                                   const std::string& surface,
                                   const std::string& canonical_id,
                                   rrqa::EntityType type, int nth = 0) {
  std::size_t at = p.text.find(surface);
  for (int i = 0; i < nth; ++i) at = p.text.find(surface, at + 1);
  rrqa::EntityMention m;
  m.canonical_id = canonical_id;
  m.canonical_name = surface;
  m.entity_type = type;
  m.score = 0.9;
  m.passage_id = p.passage_id;
  m.char_start = at;
  m.char_end = at + surface.size();
  m.surface = surface;
  m.mention_id = p.passage_id + "@" + std::to_string(at);
  return m;
}

inline rrqa::GazetteerEntry entry(const std::string& surface,
                                  const std::string& id, rrqa::EntityType type,
                                  double score) {
  return {rrqa::tokenize_terms(surface), id, surface, type, score};
}

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rrqa_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::filesystem::path rescue_dir() { return RRQA_FIXTURE_DIR "/rescue"; }

}  // namespace fixtures
