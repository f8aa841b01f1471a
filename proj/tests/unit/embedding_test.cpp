#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "rrqa/adapter.hpp"
#include "rrqa/embedding.hpp"

using rrqa::ErrorCode;
using rrqa::HashedTfIdfEmbedder;

namespace {

const std::vector<std::string> kVocabulary = {
    "chicago bears won the game", "paris weather is mild in spring",
    "the bears play in chicago", "rain in paris", "who won super bowl xx"};

double norm(const rrqa::Embedding& v) { return std::sqrt(rrqa::dot(v, v)); }

}  // namespace

TEST(HashedEmbedder, SelfSimilarityIsOne) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary, 256);
  for (const char* text : {"chicago bears", "x", "Paris weather, Paris rain!",
                           "never seen tokens"}) {
    const auto v = embedder.embed(text);
    EXPECT_EQ(v.size(), 256u);
    EXPECT_NEAR(rrqa::dot(v, v), 1.0, 1e-12) << text;
  }
}

TEST(HashedEmbedder, TokenFreeTextIsZero) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary, 64);
  EXPECT_EQ(norm(embedder.embed("")), 0.0);
  EXPECT_EQ(norm(embedder.embed(" ?! ")), 0.0);
}

TEST(HashedEmbedder, CosineOrdering) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary);
  const auto base = embedder.embed("chicago bears");
  EXPECT_GT(rrqa::dot(base, embedder.embed("chicago bears won")),
            rrqa::dot(base, embedder.embed("paris weather")));
}

TEST(HashedEmbedder, MatchesDefinition) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary, 128);
  for (const auto& text : {std::string("the bears won"), std::string("unseen words here"),
                           std::string("paris paris chicago")}) {
    const auto got = embedder.embed(text);
    const auto want = oracle::hashed_tfidf(kVocabulary, text, 128);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(HashedEmbedder, UnseenTermsGetMaximumIdf) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary, 64);
  EXPECT_DOUBLE_EQ(embedder.idf("zzz"), std::log(6.0 / 1.0) + 1.0);
  EXPECT_DOUBLE_EQ(embedder.idf("paris"), std::log(6.0 / 3.0) + 1.0);
  EXPECT_GT(embedder.idf("zzz"), embedder.idf("paris"));
}

TEST(HashedEmbedder, JsonRoundTrip) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary, 32);
  const auto copy = HashedTfIdfEmbedder::from_json(embedder.to_json());
  EXPECT_EQ(copy.dim(), 32u);
  EXPECT_EQ(copy.embed("chicago rain"), embedder.embed("chicago rain"));
  EXPECT_EQ(embedder.to_json().dump(), copy.to_json().dump());
}

TEST(HashedEmbedder, ZeroDimRejected) {
  EXPECT_RRQA_ERROR(HashedTfIdfEmbedder(0, 1, {}), ErrorCode::kInvalidArgument);
}

TEST(EmbeddingMatrix, EmbedAllMatchesSequential) {
  std::vector<std::string> texts;
  for (int i = 0; i < 300; ++i) texts.push_back("text number " + std::to_string(i % 17) + " of " + std::to_string(i));
  const auto embedder = HashedTfIdfEmbedder::fit(texts, 64);
  const auto matrix = rrqa::embed_all(embedder, texts);
  ASSERT_EQ(matrix.rows(), texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto row = matrix.row(i);
    EXPECT_EQ(rrqa::Embedding(row.begin(), row.end()), embedder.embed(texts[i]));
  }
}

TEST(EmbeddingMatrix, SaveLoadRoundTripAndCorruption) {
  const auto embedder = HashedTfIdfEmbedder::fit(kVocabulary, 16);
  const auto matrix = rrqa::embed_all(embedder, kVocabulary);
  fixtures::TempDir dir;
  matrix.save(dir / "m.bin");
  EXPECT_EQ(rrqa::EmbeddingMatrix::load(dir / "m.bin"), matrix);

  std::string bytes = fixtures::read_file(dir / "m.bin");
  bytes[bytes.size() - 3] ^= 0x5a;
  fixtures::write_file(dir / "bad.bin", bytes);
  EXPECT_RRQA_ERROR(rrqa::EmbeddingMatrix::load(dir / "bad.bin"),
                    ErrorCode::kChecksumMismatch);

  fixtures::write_file(dir / "short.bin", bytes.substr(0, bytes.size() - 8));
  EXPECT_RRQA_ERROR(rrqa::EmbeddingMatrix::load(dir / "short.bin"),
                    ErrorCode::kMalformedRecord);
  fixtures::write_file(dir / "magic.bin", "NOTMAGIC" + bytes.substr(8));
  EXPECT_RRQA_ERROR(rrqa::EmbeddingMatrix::load(dir / "magic.bin"),
                    ErrorCode::kMalformedRecord);
}

TEST(EmbeddingMatrix, RowLengthChecked) {
  rrqa::EmbeddingMatrix matrix(3);
  const std::vector<double> wrong = {1.0, 2.0};
  EXPECT_RRQA_ERROR(matrix.append(wrong), ErrorCode::kInvalidArgument);
}

TEST(AdapterEmbedder, BatchProtocol) {
  auto channel = std::make_shared<rrqa::FunctionChannel>([](const std::string& line) {
    const auto request = nlohmann::json::parse(line);
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& text : request["texts"]) {
      vectors.push_back({static_cast<double>(text.get<std::string>().size()), 1.0});
    }
    return nlohmann::json{{"vectors", vectors}, {"dim", 2}}.dump();
  });
  const rrqa::AdapterEmbedder embedder(channel, 2);
  const auto vectors = embedder.embed_batch({"abc", "z"});
  ASSERT_EQ(vectors.size(), 2u);
  EXPECT_EQ(vectors[0], (rrqa::Embedding{3.0, 1.0}));
  EXPECT_EQ(embedder.embed("four"), (rrqa::Embedding{4.0, 1.0}));
}

TEST(AdapterEmbedder, DimensionMismatchIsFatal) {
  const std::vector<std::string> bad_replies = {
      R"({"vectors":[[1,2,3]],"dim":3})",
      R"({"vectors":[[1]],"dim":2})",
      R"({"vectors":[],"dim":2})",
      R"({"dim":2})",
  };
  for (const auto& reply : bad_replies) {
    auto channel = std::make_shared<rrqa::FunctionChannel>(
        [reply](const std::string&) { return reply; });
    const rrqa::AdapterEmbedder embedder(channel, 2);
    EXPECT_RRQA_ERROR(embedder.embed("x"), ErrorCode::kAdapter);
  }
}
