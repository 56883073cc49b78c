// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "arena/core.hpp"
#include "arena/providers.hpp"
#include "arena/textproc.hpp"

namespace arena {

enum class QueryAgentKind { human_file, lexical, semantic, llm };

std::string_view to_string(QueryAgentKind kind);
QueryAgentKind parse_query_agent_kind(std::string_view name);

struct QueryAgentSpec {
  std::string name;
  QueryAgentKind kind = QueryAgentKind::lexical;
  int k = 5;
  /// Candidate pool for the semantic agent.
  int pool_size = 1000;
  /// Human variations file (human_file).
  std::filesystem::path path;
  /// Generator tag (semantic, llm) and embedder tag (semantic).
  std::string generator;
  std::string embedder;
  GenerationParams generation{1.0, 0.95, 4096, 0};
  /// Prompt template override; empty selects the built-in template.
  std::string prompt_template;

  void validate() const;
};

/// Records {topic_id, query_text, frequency}, one JSON object per line. Keeps
/// the k most frequent variations of a topic (ties: smaller text first).
/// Errors: MissingTopic, MalformedFile.
std::vector<Query> load_human_variations(const std::filesystem::path& path, std::string_view topic_id, int k);

struct Keyphrase {
  std::string text;
  std::vector<std::string> terms;
  /// Lower is better.
  double score = 0.0;
};

/// Unsupervised keyphrase candidates from a single text. Candidates are
/// 1..max_phrase_len token n-grams inside one sentence that neither start nor
/// end with a stopword. For content term t with first token position pos(t)
/// and frequency tf(t):
///   weight(t) = ln(3 + pos(t)) * max_tf / tf(t)
///   score(phrase) = product of weight(t) over its non-stopword terms.
/// Returned ascending by score, ties by text; each distinct phrase once.
std::vector<Keyphrase> extract_keyphrases(std::string_view backstory, int max_phrase_len = 3,
                                          const StopwordList& stopwords = default_stopwords());

/// Keyphrases ranked by BM25 against the backstory as a document; the k best
/// with a positive score become queries. Errors: NoCandidates.
std::vector<Query> lexical_query_agent(const Topic& topic, const TermStats& stats, int k,
                                       const std::string& agent_tag = "lexical",
                                       const StopwordList& stopwords = default_stopwords());

/// doc2query-style pool from the generator, case-folded dedup, then the k
/// candidates closest to the backstory embedding. Errors: PoolTooSmall and
/// provider errors.
std::vector<Query> semantic_query_agent(const Topic& topic, const TextGenerator& generator, const Embedder& embedder,
                                        int pool_size, int k, const GenerationParams& params = {1.0, 0.95, 4096, 0},
                                        const std::string& prompt_template = {});

/// Plain-list prompt; the first k parsed lines in generation order. One retry
/// (next seed) when the answer is short, then MalformedResponse.
std::vector<Query> llm_query_agent(const Topic& topic, const TextGenerator& generator, int k,
                                   const GenerationParams& params = {1.0, 0.95, 4096, 0},
                                   const std::string& prompt_template = {});

/// Non-blank lines with list markers ("1.", "2)", "-", "*", bullets) and
/// surrounding quotes stripped; lines without tokens are skipped.
std::vector<std::string> parse_list_response(std::string_view response);

struct QueryAgentResources {
  const ProviderRegistry* providers = nullptr;
  /// Statistics for the lexical agent; when null, the backstory's sentences.
  const TermStats* stats = nullptr;
};

std::vector<Query> generate_queries(const Topic& topic, const QueryAgentSpec& spec,
                                    const QueryAgentResources& resources);

}  // namespace arena
