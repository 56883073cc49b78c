// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

inline constexpr int kDefaultMaxTerms = 150;

enum class AgentKind { human, lexical, semantic, llm, static_agent };

std::string_view to_string(AgentKind kind);
/// Throws ArenaError(invalid_argument) on an unknown name.
AgentKind parse_agent_kind(std::string_view name);

/// Identifies an agent configuration (not an instance: two static agents in
/// one competition share an AgentId and are told apart by their slot).
struct AgentId {
  AgentKind kind = AgentKind::human;
  std::string model_tag;
  std::string params_digest;

  std::string key() const;
  auto operator<=>(const AgentId&) const = default;
};

struct Document {
  std::string id;
  std::string topic_id;
  AgentId author;
  std::string text;
  int round_created = 0;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Topic {
  std::string id;
  std::string backstory;
  /// query_id -> (doc_id -> grade). Judgments stored under the topic id
  /// itself apply to every query of the topic.
  std::map<std::string, std::map<std::string, int>> judgments;

  /// Grades for a query, falling back to topic-level judgments. Null if none.
  const std::map<std::string, int>* grades_for(const std::string& query_id) const;

  friend bool operator==(const Topic&, const Topic&) = default;
};

struct Query {
  std::string id;
  std::string topic_id;
  std::string text;
  AgentId origin;

  friend bool operator==(const Query&, const Query&) = default;
};

enum class CorpusKind { human, llm, mixed };

std::string_view to_string(CorpusKind kind);
CorpusKind parse_corpus_kind(std::string_view name);

struct Corpus {
  CorpusKind kind = CorpusKind::human;
  std::vector<Document> documents;
};

/// Throws ArenaError(kind_mismatch) when an author kind violates `kind`, and
/// ArenaError(empty_input) for an empty list.
Corpus build_corpus(std::vector<Document> docs, CorpusKind kind);

struct RankEntry {
  std::string doc_id;
  double score = 0.0;

  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/// Strictly ordered: scores non-increasing, ties by ascending doc_id.
struct RankedList {
  std::string query_id;
  int round = 0;
  std::vector<RankEntry> entries;

  std::size_t size() const { return entries.size(); }
  /// 1-based rank, or nullopt if absent.
  std::optional<int> rank_of(std::string_view doc_id) const;

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Sorts (doc_id, score) pairs into a RankedList.
RankedList make_ranked_list(std::string query_id, int round, std::vector<RankEntry> entries);

/// True iff entries are a permutation of `doc_ids`, scores are non-increasing
/// and equal scores appear in ascending doc_id order.
bool satisfies_ranking_invariants(const RankedList& list, std::span<const std::string> doc_ids);

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Terms as counted against the length limit (see tokenize).
std::size_t count_terms(std::string_view text);

/// Violations: "empty_document", "term_limit", "not_plaintext". Control
/// characters other than newline and tab are never plaintext; `forbidden`
/// adds further characters (e.g. markup such as "<>").
ValidationResult validate_text(std::string_view text, int max_terms = kDefaultMaxTerms,
                               std::string_view forbidden = {});
ValidationResult validate_document(const Document& doc, int max_terms = kDefaultMaxTerms,
                                   std::string_view forbidden = {});

struct ModificationProposal {
  int source_sentence_index = 0;
  std::string target_sentence;
  double score = 0.0;
  std::string provenance;

  friend bool operator==(const ModificationProposal&, const ModificationProposal&) = default;
};

struct Participant {
  std::string slot;
  AgentId agent;

  friend bool operator==(const Participant&, const Participant&) = default;
};

struct RoundRecord {
  int index = 0;
  /// One list per log query, in log query order.
  std::vector<RankedList> rankings;
  /// slot -> the document version that competed in this round.
  std::map<std::string, Document> documents;
  /// slot -> the change the agent made after seeing this round's ranking.
  std::map<std::string, std::optional<ModificationProposal>> proposals;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct CompetitionLog {
  std::string topic_id;
  std::vector<Query> queries;
  std::vector<Participant> participants;
  std::vector<RoundRecord> rounds;
  std::uint64_t seed = 0;
  /// Free-form run metadata (ranker, query agent, config hash, ...).
  std::map<std::string, std::string> labels;
  bool complete = false;
  std::string error;

  /// Rank of a slot's document in a round (1-based round index) for a query index.
  int rank_of(const std::string& slot, int round, std::size_t query_index = 0) const;

  friend bool operator==(const CompetitionLog&, const CompetitionLog&) = default;
};

/// Appends a round with index last+1. Throws ArenaError(incomplete_round) if a
/// query has no ranking or a participant has no document.
CompetitionLog snapshot_round(CompetitionLog log, std::vector<RankedList> rankings,
                              std::map<std::string, Document> documents,
                              std::map<std::string, std::optional<ModificationProposal>> proposals);

}  // namespace arena
