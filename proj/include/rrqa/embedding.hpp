#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "rrqa/adapter.hpp"

namespace rrqa {

using Embedding = std::vector<double>;

inline constexpr std::size_t kDefaultEmbeddingDim = 1024;

/// Text -> fixed-length vector. Must be deterministic and safe to call from
/// several threads.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dim() const = 0;
  virtual Embedding embed(std::string_view text) const = 0;
  virtual std::vector<Embedding> embed_batch(
      const std::vector<std::string>& texts) const;
};

/// TF-IDF over the fitted vocabulary, hashed into `dim` signed buckets and
/// L2-normalized. Terms never seen during fitting get the maximum idf, so only
/// token-free text maps to the zero vector.
class HashedTfIdfEmbedder final : public EmbeddingProvider {
 public:
  HashedTfIdfEmbedder(std::size_t dim, std::size_t document_count,
                      std::unordered_map<std::string, std::size_t> document_frequency);

  static HashedTfIdfEmbedder fit(const std::vector<std::string>& texts,
                                 std::size_t dim = kDefaultEmbeddingDim);

  std::size_t dim() const override { return dim_; }
  Embedding embed(std::string_view text) const override;

  /// ln((1 + N) / (1 + df)) + 1
  double idf(std::string_view term) const;

  nlohmann::json to_json() const;
  static HashedTfIdfEmbedder from_json(const nlohmann::json& value);

 private:
  std::size_t dim_;
  std::size_t document_count_;
  std::unordered_map<std::string, std::size_t> document_frequency_;
};

/// External encoder over the batch protocol
/// {"texts": [...]} -> {"vectors": [[...], ...], "dim": n}.
/// A dim or vector-length mismatch is a fatal kAdapter error.
class AdapterEmbedder final : public EmbeddingProvider {
 public:
  AdapterEmbedder(std::shared_ptr<LineChannel> channel, std::size_t dim)
      : channel_(std::move(channel)), dim_(dim) {}

  std::size_t dim() const override { return dim_; }
  Embedding embed(std::string_view text) const override;
  std::vector<Embedding> embed_batch(
      const std::vector<std::string>& texts) const override;

 private:
  std::shared_ptr<LineChannel> channel_;
  std::size_t dim_;
};

double dot(std::span<const double> lhs, std::span<const double> rhs);

/// Row-major store of equal-length vectors.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(std::size_t dim) : dim_(dim) {}

  static EmbeddingMatrix from_rows(std::size_t dim,
                                   const std::vector<Embedding>& rows);

  void append(std::span<const double> row);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  /// Binary: "RRQAEMB1", u64 dim, u64 rows, u64 checksum, then doubles.
  void save(const std::filesystem::path& path) const;
  static EmbeddingMatrix load(const std::filesystem::path& path);

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// Embeds `texts` with `provider`, fanning out across threads when the
/// provider is the built-in one.
EmbeddingMatrix embed_all(const EmbeddingProvider& provider,
                          const std::vector<std::string>& texts);

}  // namespace rrqa
