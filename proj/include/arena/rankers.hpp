// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/core.hpp"
#include "arena/parallel.hpp"
#include "arena/providers.hpp"
#include "arena/textproc.hpp"

namespace arena {

enum class RankerKind { bm25, tfidf_sum, semantic, llm };

std::string_view to_string(RankerKind kind);
RankerKind parse_ranker_kind(std::string_view name);

/// Ranker family of a kind: bm25/tfidf_sum are lexical, semantic is
/// semantic, llm is llm.
AgentKind ranker_family(RankerKind kind);

struct RankerSpec {
  std::string name;
  RankerKind kind = RankerKind::bm25;
  double k1 = 1.2;
  double b = 0.75;
  /// Embedder tag (semantic) or relevance-model tag (llm).
  std::string provider;

  /// Throws ArenaError(config_error) for missing or out-of-range parameters.
  void validate() const;
};

/// Okapi BM25 over distinct query terms, with the shared smoothed idf.
double bm25_score(std::span<const std::string> query_tokens, std::span<const std::string> doc_tokens,
                  const TermStats& stats, double k1 = 1.2, double b = 0.75);

/// Sum over distinct query terms of tf(t, doc) * idf(t).
double tfidf_sum_score(std::span<const std::string> query_tokens, std::span<const std::string> doc_tokens,
                       const TermStats& stats);

double semantic_score(const std::string& query, const std::string& doc, const Embedder& embedder);

double llm_pointwise_score(const std::string& query, const std::string& doc, const RelevanceModel& model);

struct RankingResources {
  const ProviderRegistry* providers = nullptr;
  /// Background statistics; when null, statistics of the ranked documents.
  const TermStats* background = nullptr;
};

/// Score of every document, in input order. Requires a non-empty document
/// list with unique ids. Any provider failure fails the whole call.
std::vector<double> score_documents(const Query& query, std::span<const Document> docs, const RankerSpec& ranker,
                                    const RankingResources& resources, Execution exec = Execution::parallel);

RankedList rank(const Query& query, std::span<const Document> docs, const RankerSpec& ranker,
                const RankingResources& resources, int round = 0, Execution exec = Execution::parallel);

/// Statistics of the given documents' tokens.
TermStats stats_of(std::span<const Document> docs);

}  // namespace arena
