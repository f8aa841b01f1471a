#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "fixtures.hpp"
#include "rrqa/pipeline.hpp"

using rrqa::ErrorCode;
using rrqa::PipelineConfig;
namespace fs = std::filesystem;

namespace {

rrqa::BuildResult build_rescue(const fs::path& out, PipelineConfig config = {}) {
  return rrqa::build_artifacts(fixtures::rescue_dir() / "corpus.jsonl",
                               fixtures::rescue_dir() / "gazetteer.jsonl", out, config);
}

const char* const kSmallCorpus =
    R"({"doc_id":"a","body":"Alpha Group bought a mill near the river in spring."})" "\n"
    R"({"doc_id":"b","body":"Beta Town grew quickly. Alpha Group hired people there."})" "\n"
    R"({"doc_id":"c","body":"Beta Town is small. Beta Town has a quiet market square."})" "\n";
const char* const kSmallGazetteer =
    R"({"surface":"Alpha Group","canonical_id":"A","canonical_name":"Alpha Group","entity_type":"PERSON_ORG","score":0.8})" "\n"
    R"({"surface":"Beta Town","canonical_id":"B","canonical_name":"Beta Town","entity_type":"LOCATION","score":0.7})" "\n";

}  // namespace

TEST(BuildArtifacts, ManifestCountsMatchHandCount) {
  fixtures::TempDir dir;
  fixtures::write_file(dir / "corpus.jsonl", kSmallCorpus);
  fixtures::write_file(dir / "gaz.jsonl", kSmallGazetteer);
  PipelineConfig config;
  config.min_passage_chars = 10;
  const auto result = rrqa::build_artifacts(dir / "corpus.jsonl", dir / "gaz.jsonl",
                                            dir / "out", config);
  const auto& counts = result.manifest["counts"];
  EXPECT_EQ(counts["documents"], 3);
  EXPECT_EQ(counts["passages"], 3);
  EXPECT_EQ(counts["answers"], 2);
  // Alpha Group twice, Beta Town three times.
  EXPECT_EQ(counts["mentions"], 5);
  EXPECT_EQ(counts["qa_pairs"], 5);
  EXPECT_EQ(counts["questions"], 5);
  EXPECT_TRUE(result.warnings.empty());
  for (const char* name : {rrqa::artifacts::kManifest, rrqa::artifacts::kPassages,
                           rrqa::artifacts::kEmbedder, rrqa::artifacts::kPassageEmbeddings,
                           rrqa::artifacts::kQuestionEmbeddings, rrqa::artifacts::kQASpace,
                           rrqa::artifacts::kQSetASpace}) {
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  }
}

TEST(BuildArtifacts, EmptyGazetteerWarns) {
  fixtures::TempDir dir;
  fixtures::write_file(dir / "gaz.jsonl", "");
  const auto result = rrqa::build_artifacts(fixtures::rescue_dir() / "corpus.jsonl",
                                            dir / "gaz.jsonl", dir / "out", {});
  EXPECT_EQ(result.manifest["counts"]["qa_pairs"], 0);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("gazetteer is empty"), std::string::npos);
}

TEST(BuildArtifacts, MissingCorpusNamesIngestStage) {
  fixtures::TempDir dir;
  try {
    rrqa::build_artifacts(dir / "missing.jsonl", fixtures::rescue_dir() / "gazetteer.jsonl",
                          dir / "out", {});
    FAIL();
  } catch (const rrqa::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("stage 'ingest'"), std::string::npos) << e.what();
  }
}

TEST(BuildArtifacts, DegenerateContextsAreCountedAndWarned) {
  fixtures::TempDir dir;
  fixtures::write_file(dir / "corpus.jsonl",
                       R"({"doc_id":"a","body":"We met St. Louis Blues fans. Blues fans cheered loudly."})" "\n");
  fixtures::write_file(dir / "gaz.jsonl",
                       R"({"surface":"St Louis Blues","canonical_id":"S","canonical_name":"St. Louis Blues","entity_type":"PERSON_ORG","score":0.9})" "\n"
                       R"({"surface":"Blues","canonical_id":"B","canonical_name":"Blues","entity_type":"PERSON_ORG","score":0.9})" "\n");
  PipelineConfig config;
  config.min_passage_chars = 10;
  const auto result = rrqa::build_artifacts(dir / "corpus.jsonl", dir / "gaz.jsonl",
                                            dir / "out", config);
  EXPECT_EQ(result.manifest["counts"]["mentions"], 2);
  EXPECT_EQ(result.manifest["counts"]["degenerate_contexts"], 1);
  EXPECT_EQ(result.manifest["counts"]["qa_pairs"], 1);
  EXPECT_EQ(result.warnings.size(), 1u);
}

TEST(BuildArtifacts, RebuildIsByteIdentical) {
  fixtures::TempDir dir;
  build_rescue(dir / "one");
  build_rescue(dir / "two");
  for (const auto& entry : fs::directory_iterator(dir / "one")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(fixtures::read_file(entry.path()), fixtures::read_file(dir / "two" / name))
        << name;
  }
}

TEST(BuildArtifacts, InvalidConfigIsRejected) {
  fixtures::TempDir dir;
  PipelineConfig config;
  config.k = 0;
  EXPECT_RRQA_ERROR(build_rescue(dir.path(), config), ErrorCode::kInvalidArgument);
  config = {};
  config.entity_threshold = 2.0;
  EXPECT_RRQA_ERROR(build_rescue(dir.path(), config), ErrorCode::kInvalidArgument);
}

TEST(Engine, WrongPassageIsRescuedByTheQuestionSetSpace) {
  fixtures::TempDir dir;
  build_rescue(dir.path());
  const auto engine = rrqa::Engine::load(dir.path(), {});
  const auto trace = engine.answer("who won Super Bowl XX");
  EXPECT_EQ(trace.passage.passage_id, "faq#0");
  ASSERT_TRUE(trace.answer1.has_value());
  EXPECT_EQ(trace.answer1->text, "Boston");
  EXPECT_EQ(trace.answer2.size(), 10u);
  EXPECT_EQ(trace.answer3.canonical_name, "Chicago Bears");
  EXPECT_EQ(trace.final.text, "Chicago Bears");
  EXPECT_EQ(trace.final.source, rrqa::AnswerSource::kReaderRetrieverQSetA);

  EXPECT_EQ(engine.answer_with("retriever-reader-large", "who won Super Bowl XX"), "Boston");
  EXPECT_EQ(engine.answer_with("reader-retriever-qsa", "who won Super Bowl XX"), "Chicago Bears");
  EXPECT_EQ(engine.answer_with("r6", "who won Super Bowl XX"), "Chicago Bears");
}

TEST(Engine, AcceptsAnswer1WhenItAppearsInAnswer2) {
  fixtures::TempDir dir;
  build_rescue(dir.path());
  const auto engine = rrqa::Engine::load(dir.path(), {});
  const auto trace = engine.answer("who coached the team in 1985");
  EXPECT_EQ(trace.final.source, rrqa::AnswerSource::kRetrieverReader);
  EXPECT_EQ(trace.final.text, "Mike Ditka");
}

TEST(Engine, CreateInMemoryMatchesLoadedEngine) {
  fixtures::TempDir dir;
  build_rescue(dir.path());
  const auto loaded = rrqa::Engine::load(dir.path(), {});

  auto corpus = rrqa::load_corpus(fixtures::rescue_dir() / "corpus.jsonl", 50);
  const rrqa::GazetteerAnnotator annotator(
      rrqa::load_gazetteer(fixtures::rescue_dir() / "gazetteer.jsonl"), {});
  const auto spaces = rrqa::build_spaces(std::move(corpus), annotator,
                                         rrqa::TemplateQuestionGenerator());
  std::vector<std::string> texts;
  for (const auto& p : spaces.corpus.passages()) texts.push_back(p.text);
  auto provider = std::make_shared<rrqa::HashedTfIdfEmbedder>(
      rrqa::HashedTfIdfEmbedder::fit(texts));
  const auto created = rrqa::Engine::create(spaces, provider, {});

  for (const char* q : {"who won Super Bowl XX", "where was the parade",
                        "what trophy did the winners receive"}) {
    EXPECT_EQ(rrqa::to_json(loaded.answer(q)).dump(), rrqa::to_json(created.answer(q)).dump());
  }
}

TEST(Engine, ExplainListsMinOfKAndPairs) {
  fixtures::TempDir dir;
  build_rescue(dir.path());
  PipelineConfig config;
  config.k = 3;
  EXPECT_EQ(rrqa::Engine::load(dir.path(), config).answer("who won").answer2.size(), 3u);
  config.k = 500;
  EXPECT_EQ(rrqa::Engine::load(dir.path(), config).answer("who won").answer2.size(), 20u);
}

TEST(Engine, MissingArtifactIsNamed) {
  fixtures::TempDir dir;
  try {
    rrqa::Engine::load(dir.path(), {});
    FAIL();
  } catch (const rrqa::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingArtifact);
    EXPECT_NE(std::string(e.what()).find("manifest.json"), std::string::npos);
  }
  build_rescue(dir.path());
  fs::remove(dir / rrqa::artifacts::kQSetASpace);
  try {
    rrqa::Engine::load(dir.path(), {});
    FAIL();
  } catch (const rrqa::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingArtifact);
    EXPECT_NE(std::string(e.what()).find("qsa_space.jsonl"), std::string::npos);
  }
}

TEST(Engine, MixedCorporaAreRejected) {
  fixtures::TempDir dir;
  build_rescue(dir / "rescue");
  fixtures::write_file(dir / "corpus.jsonl", kSmallCorpus);
  fixtures::write_file(dir / "gaz.jsonl", kSmallGazetteer);
  PipelineConfig config;
  config.min_passage_chars = 10;
  rrqa::build_artifacts(dir / "corpus.jsonl", dir / "gaz.jsonl", dir / "small", config);
  fs::copy_file(dir / "small" / rrqa::artifacts::kQASpace,
                dir / "rescue" / rrqa::artifacts::kQASpace,
                fs::copy_options::overwrite_existing);
  EXPECT_RRQA_ERROR(rrqa::Engine::load(dir / "rescue", {}), ErrorCode::kIntegrity);
}

TEST(Engine, UnknownSystemListsValidNames) {
  fixtures::TempDir dir;
  build_rescue(dir.path());
  const auto engine = rrqa::Engine::load(dir.path(), {});
  try {
    engine.systems({"r6", "drqa"});
    FAIL();
  } catch (const rrqa::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSystem);
    const std::string message = e.what();
    for (auto name : rrqa::kSystemNames) {
      EXPECT_NE(message.find(std::string(name)), std::string::npos) << name;
    }
  }
  EXPECT_EQ(engine.systems({"r6", "reader-retriever-qa"}).size(), 2u);
}

TEST(Engine, ExternalModelsThroughTheCommandLineProtocol) {
  fixtures::TempDir dir;
  PipelineConfig config;
  config.question_generator_command = std::string(RRQA_FAKE_MODEL) + " qg";
  config.embedding_command = std::string(RRQA_FAKE_MODEL) + " embed 6";
  config.embedding_dim = 6;
  const auto result = build_rescue(dir.path(), config);
  EXPECT_EQ(result.manifest["embedding"]["provider"], "adapter");
  EXPECT_FALSE(fs::exists(dir / rrqa::artifacts::kEmbedder));
  const auto qsa = rrqa::load_qsa_space(dir / rrqa::artifacts::kQSetASpace);
  EXPECT_EQ(qsa.pairs.at("E1").questions.front(), "QG Chicago Bears?");

  config.reader_command = std::string(RRQA_FAKE_MODEL) + " reader";
  const auto engine = rrqa::Engine::load(dir.path(), config);
  const auto trace = engine.answer("who won Super Bowl XX");
  EXPECT_EQ(trace.answer2.size(), 10u);
  ASSERT_TRUE(trace.answer1.has_value());
  EXPECT_EQ(trace.passage.text.substr(trace.answer1->char_start,
                                      trace.answer1->char_end - trace.answer1->char_start),
            trace.answer1->text);
}
