// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "arena/error.hpp"
#include "arena/query_agents.hpp"
#include "arena/rankers.hpp"
#include "support.hpp"

namespace arena {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> texts(const std::vector<Query>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(q.text);
  return out;
}

// Stub that always answers with a fixed string.
class FixedGenerator final : public TextGenerator {
 public:
  explicit FixedGenerator(std::vector<std::string> answers) : answers_(std::move(answers)) {}
  std::string generate(const std::string&, const GenerationParams& p) const override {
    return answers_[std::min<std::size_t>(p.seed, answers_.size() - 1)];
  }
  std::string tag() const override { return "fixed"; }

 private:
  std::vector<std::string> answers_;
};

fs::path write_variations(const std::string& body) {
  const auto p = fs::temp_directory_path() / "arena-variations.jsonl";
  std::ofstream(p) << body;
  return p;
}

TEST(HumanVariations, TopKByFrequency) {
  std::string body;
  for (int i = 0; i < 7; ++i) {
    body += R"({"topic_id": "t1", "query_text": "q)" + std::to_string(i) + R"(", "frequency": )" +
            std::to_string(10 - i) + "}\n";
  }
  body += R"({"topic_id": "t2", "query_text": "other", "frequency": 99})" "\n";
  const auto p = write_variations(body);
  EXPECT_EQ(texts(load_human_variations(p, "t1", 5)), (std::vector<std::string>{"q0", "q1", "q2", "q3", "q4"}));
  EXPECT_EQ(load_human_variations(p, "t1", 7).size(), 7u);
  EXPECT_EQ(load_human_variations(p, "t2", 3).size(), 1u);
  EXPECT_THROW(load_human_variations(p, "t9", 3), ArenaError);
}

TEST(HumanVariations, TieAtCutKeepsSmallerText) {
  const auto p = write_variations(
      R"({"topic_id": "t1", "query_text": "top", "frequency": 5})" "\n"
      R"({"topic_id": "t1", "query_text": "zeta", "frequency": 2})" "\n"
      R"({"topic_id": "t1", "query_text": "alpha", "frequency": 2})" "\n");
  EXPECT_EQ(texts(load_human_variations(p, "t1", 2)), (std::vector<std::string>{"top", "alpha"}));
}

TEST(HumanVariations, MalformedLine) {
  const auto p = write_variations("{\"topic_id\": \"t1\", \"query_text\": \"a\"\n");
  try {
    load_human_variations(p, "t1", 1);
    FAIL();
  } catch (const ArenaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_file);
  }
}

TEST(Keyphrases, HandScoredExample) {
  const auto k = extract_keyphrases("Cheap flights to Rome. Cheap hotels in Rome.");
  // tf: cheap 2, flights 1, rome 2, hotels 1; max_tf 2; first positions 0, 1, 3, 5.
  const double cheap = std::log(3.0), flights = std::log(4.0) * 2, rome = std::log(6.0), hotels = std::log(8.0) * 2;
  const std::vector<std::pair<std::string, double>> expect{
      {"cheap", cheap},
      {"rome", rome},
      {"flights", flights},
      {"cheap flights", cheap * flights},
      {"hotels", hotels},
      {"cheap hotels", cheap * hotels},
      {"flights to rome", flights * rome},
      {"hotels in rome", hotels * rome}};
  ASSERT_EQ(k.size(), expect.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    EXPECT_EQ(k[i].text, expect[i].first);
    EXPECT_NEAR(k[i].score, expect[i].second, 1e-12);
  }
}

TEST(Keyphrases, DegenerateInputs) {
  const auto one = extract_keyphrases("Rome rome ROME. Rome!");
  ASSERT_FALSE(one.empty());
  EXPECT_EQ(one.front().text, "rome");
  EXPECT_TRUE(extract_keyphrases("the of and to. a an the.").empty());
}

TEST(LexicalQueryAgent, OrderMatchesBm25Oracle) {
  Topic topic{"t1", "Cheap flights to Rome. Cheap hotels in Rome.", {}};
  std::vector<std::vector<std::string>> coll{tokenize("cheap flights rome"), tokenize("rome hotels"),
                                             tokenize("garden soil")};
  const auto stats = compute_term_stats(coll);
  const auto qs = lexical_query_agent(topic, stats, 3);
  ASSERT_EQ(qs.size(), 3u);
  const auto doc = tokenize(topic.backstory);
  double prev = INFINITY;
  for (const auto& q : qs) {
    const double s = testing::bm25_oracle(tokenize(q.text), doc, coll, 1.2, 0.75);
    EXPECT_LE(s, prev);
    prev = s;
  }
  EXPECT_EQ(qs.front().origin.kind, AgentKind::lexical);
  EXPECT_EQ(lexical_query_agent(topic, stats, 100).size(), 8u);
  Topic empty{"t2", "the of and.", {}};
  EXPECT_THROW(lexical_query_agent(empty, stats, 3), ArenaError);
}

TEST(ParseList, Markers) {
  EXPECT_EQ(parse_list_response("1. a\n2. b\n3. c"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(parse_list_response("\n- a\n\n* b\n  \n3) \"c d\"\n"), (std::vector<std::string>{"a", "b", "c d"}));
  EXPECT_EQ(parse_list_response("1.\n2. --\n"), std::vector<std::string>{});
}

TEST(LlmQueryAgent, FirstKLinesAndRetry) {
  Topic topic{"t1", "Cheap flights.", {}};
  FixedGenerator g({"1. a\n2. b\n3. c\n4. d"});
  EXPECT_EQ(texts(llm_query_agent(topic, g, 3)), (std::vector<std::string>{"a", "b", "c"}));
  FixedGenerator retry({"1. a", "x\ny\nz"});
  EXPECT_EQ(texts(llm_query_agent(topic, retry, 3)), (std::vector<std::string>{"x", "y", "z"}));
  FixedGenerator short_both({"1. a\n2. b"});
  try {
    llm_query_agent(topic, short_both, 5);
    FAIL();
  } catch (const ArenaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_response);
  }
}

TEST(SemanticQueryAgent, ClosestToBackstoryFirst) {
  Topic topic{"t1", "cheap flights to rome", {}};
  const auto reg = ProviderRegistry::local_stubs(0);
  FixedGenerator g({"garden soil\nCHEAP flights\ncheap flights to rome\ncheap flights\nweather"});
  const auto qs = semantic_query_agent(topic, g, reg.embedder("stub-e5"), 10, 3);
  ASSERT_EQ(qs.size(), 3u);
  EXPECT_EQ(qs[0].text, "cheap flights to rome");
  const auto all = semantic_query_agent(topic, g, reg.embedder("stub-e5"), 4, 4);
  EXPECT_EQ(all.size(), 4u);
  try {
    semantic_query_agent(topic, g, reg.embedder("stub-e5"), 10, 5);
    FAIL();
  } catch (const ArenaError& e) {
    EXPECT_EQ(e.code(), ErrorCode::pool_too_small);
  }
}

TEST(SemanticQueryAgent, DeterministicWithStubs) {
  Topic topic{"t1", "I am planning a cheap summer trip to London and need flights and a hotel.", {}};
  const auto reg = ProviderRegistry::local_stubs(0);
  const auto a = semantic_query_agent(topic, reg.generator("stub-llama"), reg.embedder("stub-e5"), 20, 3);
  const auto b = semantic_query_agent(topic, reg.generator("stub-llama"), reg.embedder("stub-e5"), 20, 3);
  EXPECT_EQ(a, b);
}

TEST(QueryAgentSpec, Validation) {
  QueryAgentSpec s{"s", QueryAgentKind::semantic, 5, 3};
  EXPECT_THROW(s.validate(), ArenaError);
  QueryAgentSpec l{"l", QueryAgentKind::llm, 5};
  EXPECT_THROW(l.validate(), ArenaError);
  QueryAgentSpec k0{"k", QueryAgentKind::lexical, 0};
  EXPECT_THROW(k0.validate(), ArenaError);
}

}  // namespace
}  // namespace arena
