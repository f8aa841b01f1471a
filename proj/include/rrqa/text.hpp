#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

/// One normalized token. Offsets are UTF-8 byte offsets into the source text.
struct Token {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Token&) const = default;
};

/// Splits on maximal runs of non-alphanumeric code points and case-folds each
/// run. Digits are alphanumeric, so "xx20" and "1986" survive as tokens.
std::vector<Token> tokenize(std::string_view text);

/// Surfaces only; what the indexes consume.
std::vector<std::string> tokenize_terms(std::string_view text);

/// Number of Unicode scalar values in a UTF-8 string. Invalid bytes count as
/// one character each.
std::size_t utf8_length(std::string_view text);

/// Simple (single code point) case folding covering Latin, Greek, Cyrillic and
/// fullwidth Latin; every other code point maps to itself.
char32_t fold_case(char32_t cp);

bool is_word_char(char32_t cp);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

bool is_sentence_terminator(char c);

/// True when [begin, end) contains one of . ! ?
bool crosses_sentence_boundary(std::string_view text, Span span);

/// The sentence enclosing `span`: starts after the last terminator before
/// span.begin, ends before the first terminator at or after span.end.
/// Surrounding whitespace is trimmed.
Span enclosing_sentence(std::string_view text, Span span);

/// Replaces every whitespace run with one space and trims both ends.
std::string collapse_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

/// 64-bit FNV-1a. Used for hashed embeddings, fingerprints and checksums.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string to_hex(std::uint64_t value);

}  // namespace rrqa
