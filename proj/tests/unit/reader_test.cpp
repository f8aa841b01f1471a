#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "rrqa/adapter.hpp"
#include "rrqa/reader.hpp"

using rrqa::EntityType;
using rrqa::ErrorCode;
using fixtures::mention;
using fixtures::passage;

TEST(LexicalReader, SingleMentionIsTheAnswer) {
  const auto p = passage("d#0", "Nothing here matches. Boston fans held a rally.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Boston", "E5", EntityType::kLocation)};
  const auto span = rrqa::builtin_read("who won Super Bowl XX", p, mentions);
  EXPECT_EQ(span.text, "Boston");
  EXPECT_EQ(span.passage_id, "d#0");
  EXPECT_EQ(span.char_start, p.text.find("Boston"));
}

TEST(LexicalReader, OverlapDecides) {
  const auto p = passage(
      "d#0", "Walter Payton ran far. Chicago Bears defeated the Patriots in New Orleans.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Walter Payton", "E3", EntityType::kPersonOrg),
      mention(p, "Chicago Bears", "E1", EntityType::kPersonOrg)};
  // "defeated", "patriots", "orleans" hit the second sentence; nothing hits the first.
  const auto span = rrqa::builtin_read("who defeated the Patriots near Orleans", p, mentions);
  EXPECT_EQ(span.text, "Chicago Bears");
  EXPECT_EQ(span.score, 3.0);
}

TEST(LexicalReader, MentionTokensDoNotCount) {
  const auto p = passage("d#0", "Chicago Bears won. Chicago hosted a parade.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Chicago Bears", "E1", EntityType::kPersonOrg),
      mention(p, "Chicago", "E7", EntityType::kLocation, 1)};
  // "chicago" belongs to both mentions, so only "parade" separates them.
  const auto span = rrqa::builtin_read("which chicago parade", p, mentions);
  EXPECT_EQ(span.text, "Chicago");
  EXPECT_EQ(span.score, 1.0);
}

TEST(LexicalReader, TiesGoToEarlierMention) {
  const auto p = passage("d#0", "Alpha met Beta downtown.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Alpha", "A", EntityType::kPersonOrg),
      mention(p, "Beta", "B", EntityType::kPersonOrg)};
  EXPECT_EQ(rrqa::builtin_read("who met downtown", p, mentions).text, "Alpha");
}

TEST(LexicalReader, NoOverlapGivesEarliestWithZeroScore) {
  const auto p = passage("d#0", "Alpha slept. Beta ate.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Alpha", "A", EntityType::kPersonOrg),
      mention(p, "Beta", "B", EntityType::kPersonOrg)};
  const auto span = rrqa::builtin_read("what is the weather", p, mentions);
  EXPECT_EQ(span.text, "Alpha");
  EXPECT_EQ(span.score, 0.0);
}

TEST(LexicalReader, NoMentionsIsNoAnswer) {
  const auto p = passage("d#0", "Plain text without entities.");
  EXPECT_RRQA_ERROR(rrqa::builtin_read("who", p, {}), ErrorCode::kNoAnswer);
}

TEST(LexicalReader, Stopwords) {
  for (const char* word : {"a", "an", "the", "of", "in", "on", "who", "what", "where",
                           "when", "which", "is", "was", "did", "do", "to"}) {
    EXPECT_TRUE(rrqa::is_reader_stopword(word)) << word;
  }
  EXPECT_FALSE(rrqa::is_reader_stopword("won"));
}

TEST(LexicalReader, StopwordsDoNotScore) {
  const auto p = passage("d#0", "Alpha is in the city. Beta did win.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Alpha", "A", EntityType::kPersonOrg),
      mention(p, "Beta", "B", EntityType::kPersonOrg)};
  EXPECT_EQ(rrqa::builtin_read("who is in the win", p, mentions).text, "Beta");
}

TEST(LexicalReader, InvariantToQuestionTokenOrder) {
  const auto p = passage(
      "d#0", "Walter Payton ran far for Chicago. Chicago Bears defeated the Patriots.");
  const std::vector<rrqa::EntityMention> mentions = {
      mention(p, "Walter Payton", "E3", EntityType::kPersonOrg),
      mention(p, "Chicago Bears", "E1", EntityType::kPersonOrg)};
  std::vector<std::string> words = {"who", "defeated", "far", "patriots", "ran", "the"};
  std::mt19937_64 rng(4);
  const auto reference = rrqa::builtin_read("who defeated far patriots ran the", p, mentions);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(words.begin(), words.end(), rng);
    std::string q;
    for (const auto& w : words) q += w + " ";
    const auto span = rrqa::builtin_read(q, p, mentions);
    EXPECT_EQ(span, reference);
    EXPECT_EQ(p.text.substr(span.char_start, span.char_end - span.char_start), span.text);
  }
}

TEST(AdapterReader, ReturnsVerbatimSpan) {
  nlohmann::json seen;
  auto channel = std::make_shared<rrqa::FunctionChannel>([&](const std::string& line) {
    seen = nlohmann::json::parse(line);
    return std::string(
        R"({"answer_text":"Chicago Bears","char_start":0,"char_end":13,"score":0.75})");
  });
  const rrqa::AdapterReader reader(channel);
  const auto p = passage("d#0", "Chicago Bears defeated the Patriots.");
  const auto span = reader.read("who defeated the Patriots", p, {});
  EXPECT_EQ(span.text, "Chicago Bears");
  EXPECT_EQ(span.score, 0.75);
  EXPECT_EQ(seen["question"], "who defeated the Patriots");
  EXPECT_EQ(seen["passage_text"], p.text);
}

TEST(AdapterReader, EmptyAnswerIsNoAnswer) {
  auto channel = std::make_shared<rrqa::FunctionChannel>([](const std::string&) {
    return std::string(R"({"answer_text":"","char_start":0,"char_end":0,"score":0})");
  });
  EXPECT_RRQA_ERROR(rrqa::AdapterReader(channel).read("q", passage("d#0", "text"), {}),
                    ErrorCode::kNoAnswer);
}

TEST(AdapterReader, SliceMismatchIsAdapterError) {
  auto channel = std::make_shared<rrqa::FunctionChannel>([](const std::string&) {
    return std::string(R"({"answer_text":"Bears","char_start":0,"char_end":5,"score":1})");
  });
  EXPECT_RRQA_ERROR(
      rrqa::AdapterReader(channel).read("q", passage("d#0", "Chicago Bears"), {}),
      ErrorCode::kAdapter);
  auto out_of_range = std::make_shared<rrqa::FunctionChannel>([](const std::string&) {
    return std::string(R"({"answer_text":"x","char_start":40,"char_end":41,"score":1})");
  });
  EXPECT_RRQA_ERROR(
      rrqa::AdapterReader(out_of_range).read("q", passage("d#0", "short"), {}),
      ErrorCode::kAdapter);
}
