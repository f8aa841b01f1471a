#include "rrqa/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <thread>

#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

namespace rrqa {

namespace {

constexpr char kMagic[8] = {'R', 'R', 'Q', 'A', 'E', 'M', 'B', '1'};

std::uint64_t checksum_of(const std::vector<double>& values) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(values.data()),
                                  values.size() * sizeof(double)));
}

}  // namespace

std::vector<Embedding> EmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(embed(text));
  return out;
}

HashedTfIdfEmbedder::HashedTfIdfEmbedder(
    std::size_t dim, std::size_t document_count,
    std::unordered_map<std::string, std::size_t> document_frequency)
    : dim_(dim),
      document_count_(document_count),
      document_frequency_(std::move(document_frequency)) {
  if (dim_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
  }
}

HashedTfIdfEmbedder HashedTfIdfEmbedder::fit(
    const std::vector<std::string>& texts, std::size_t dim) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& text : texts) {
    auto terms = tokenize_terms(text);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& term : terms) ++df[std::move(term)];
  }
  return HashedTfIdfEmbedder(dim, texts.size(), std::move(df));
}

double HashedTfIdfEmbedder::idf(std::string_view term) const {
  auto it = document_frequency_.find(std::string(term));
  const double df = it == document_frequency_.end()
                        ? 0.0
                        : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(document_count_)) / (1.0 + df)) +
         1.0;
}

Embedding HashedTfIdfEmbedder::embed(std::string_view text) const {
  Embedding vector(dim_, 0.0);
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (auto& term : tokenize_terms(text)) {
    if (counts[term]++ == 0) order.push_back(std::move(term));
  }
  std::sort(order.begin(), order.end());
  for (const auto& term : order) {
    const std::uint64_t hash = fnv1a64(term);
    const std::size_t bucket = static_cast<std::size_t>(hash % dim_);
    const double sign = (hash >> 63) != 0 ? -1.0 : 1.0;
    vector[bucket] += sign * static_cast<double>(counts[term]) * idf(term);
  }
  double norm = 0.0;
  for (double v : vector) norm += v * v;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& v : vector) v /= norm;
  }
  return vector;
}

nlohmann::json HashedTfIdfEmbedder::to_json() const {
  // Sorted for byte-stable artifacts.
  std::map<std::string, std::size_t> sorted(document_frequency_.begin(),
                                            document_frequency_.end());
  return nlohmann::json{{"provider", "hashed_tfidf"},
                        {"dim", dim_},
                        {"document_count", document_count_},
                        {"document_frequency", sorted}};
}

HashedTfIdfEmbedder HashedTfIdfEmbedder::from_json(const nlohmann::json& value) {
  try {
    return HashedTfIdfEmbedder(
        value.at("dim").get<std::size_t>(),
        value.at("document_count").get<std::size_t>(),
        value.at("document_frequency")
            .get<std::unordered_map<std::string, std::size_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("embedder vocabulary: ") + e.what());
  }
}

Embedding AdapterEmbedder::embed(std::string_view text) const {
  return embed_batch({std::string(text)}).front();
}

std::vector<Embedding> AdapterEmbedder::embed_batch(
    const std::vector<std::string>& texts) const {
  const auto response = exchange_json(*channel_, {{"texts", texts}});
  std::size_t declared = 0;
  std::vector<Embedding> vectors;
  try {
    declared = response.at("dim").get<std::size_t>();
    vectors = response.at("vectors").get<std::vector<Embedding>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kAdapter,
                std::string("embedding response malformed: ") + e.what());
  }
  if (declared != dim_) {
    throw Error(ErrorCode::kAdapter,
                "embedding adapter declared dim " + std::to_string(declared) +
                    ", configured dim is " + std::to_string(dim_));
  }
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::kAdapter,
                "embedding adapter returned " + std::to_string(vectors.size()) +
                    " vectors for " + std::to_string(texts.size()) + " texts");
  }
  for (const auto& v : vectors) {
    if (v.size() != declared) {
      throw Error(ErrorCode::kAdapter,
                  "embedding adapter returned a vector of length " +
                      std::to_string(v.size()) + " with declared dim " +
                      std::to_string(declared));
    }
  }
  return vectors;
}

double dot(std::span<const double> lhs, std::span<const double> rhs) {
  double total = 0.0;
  const std::size_t n = std::min(lhs.size(), rhs.size());
  for (std::size_t i = 0; i < n; ++i) total += lhs[i] * rhs[i];
  return total;
}

EmbeddingMatrix EmbeddingMatrix::from_rows(std::size_t dim,
                                           const std::vector<Embedding>& rows) {
  EmbeddingMatrix matrix(dim);
  matrix.values_.reserve(dim * rows.size());
  for (const auto& row : rows) matrix.append(row);
  return matrix;
}

void EmbeddingMatrix::append(std::span<const double> row) {
  if (row.size() != dim_) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding of length " + std::to_string(row.size()) +
                    " does not match dim " + std::to_string(dim_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
}

void EmbeddingMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const std::uint64_t header[3] = {dim_, rows(), checksum_of(values_)};
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[sizeof kMagic];
  std::uint64_t header[3];
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::kMalformedRecord,
                path.string() + " is not an embedding matrix");
  }
  EmbeddingMatrix matrix(static_cast<std::size_t>(header[0]));
  matrix.values_.resize(static_cast<std::size_t>(header[0] * header[1]));
  in.read(reinterpret_cast<char*>(matrix.values_.data()),
          static_cast<std::streamsize>(matrix.values_.size() * sizeof(double)));
  if (!in) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + " is truncated");
  }
  if (checksum_of(matrix.values_) != header[2]) {
    throw Error(ErrorCode::kChecksumMismatch,
                path.string() + " fails its checksum");
  }
  return matrix;
}

EmbeddingMatrix embed_all(const EmbeddingProvider& provider,
                          const std::vector<std::string>& texts) {
  if (dynamic_cast<const HashedTfIdfEmbedder*>(&provider) == nullptr) {
    return EmbeddingMatrix::from_rows(provider.dim(), provider.embed_batch(texts));
  }
  std::vector<Embedding> rows(texts.size());
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, 16);
  const std::size_t chunk = (texts.size() + workers - 1) / std::max<std::size_t>(workers, 1);
  std::vector<std::jthread> threads;
  for (std::size_t begin = 0; begin < texts.size(); begin += chunk) {
    const std::size_t end = std::min(texts.size(), begin + chunk);
    threads.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) rows[i] = provider.embed(texts[i]);
    });
  }
  threads.clear();
  return EmbeddingMatrix::from_rows(provider.dim(), rows);
}

}  // namespace rrqa
