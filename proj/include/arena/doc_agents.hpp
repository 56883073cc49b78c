// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arena/core.hpp"
#include "arena/parallel.hpp"
#include "arena/providers.hpp"
#include "arena/rng.hpp"
#include "arena/textproc.hpp"

namespace arena {

// ---------------------------------------------------------------------------
// Parameters

/// score_lex = lambda * (QT_t - QT_s) + (1 - lambda) * (ST_t - ST_s), pairs
/// admitted when the TF.IDF cosine of source and target exceeds eta.
struct LexicalAgentParams {
  double lambda = 0.5;
  int m = 2;
  double eta = 0.0;

  void validate() const;
  std::string digest() const;
  static std::vector<LexicalAgentParams> grid();
};

enum class CandidateStrategy { all, better, best };

std::string_view to_string(CandidateStrategy s);
CandidateStrategy parse_candidate_strategy(std::string_view name);

/// score_sem = lambda * cos(src, tgt) + (1 - lambda) * cos(tgt, query), pairs
/// admitted when entailment_prob(premise = tgt, hypothesis = src) > eta.
/// With source_query_affinity the second term is cos(src, query) instead.
struct SemanticAgentParams {
  CandidateStrategy strategy = CandidateStrategy::better;
  double lambda = 0.0;
  double eta = 0.5;
  std::string embedder = "stub-e5";
  std::string nli = "stub-nli";
  bool source_query_affinity = false;

  void validate() const;
  std::string digest() const;
  /// strategy x lambda x eta over the standard grids, fixed provider tags.
  static std::vector<SemanticAgentParams> grid(const std::string& embedder, const std::string& nli);
};

enum class PromptStrategy { pair, all };

std::string_view to_string(PromptStrategy s);
PromptStrategy parse_prompt_strategy(std::string_view name);

struct LlmAgentParams {
  PromptStrategy strategy = PromptStrategy::pair;
  bool no_copy = false;
  GenerationParams generation{0.7, 0.95, 512, 0};
  std::string generator = "stub-llama";
  /// Empty selects the built-in rewrite template.
  std::string prompt_template;

  void validate() const;
  std::string digest() const;
  static std::vector<LlmAgentParams> grid(const std::string& generator);
};

// ---------------------------------------------------------------------------
// Features and candidate sets

/// Share of sentence tokens that are query terms (occurrences, not distinct
/// terms). Throws ArenaError(empty_sentence) for a sentence without tokens.
double qt_feature(std::span<const std::string> sentence_tokens, std::span<const std::string> query_tokens);

/// Centroid of the TF.IDF vectors of the top-m documents of `ranking`.
/// Throws ArenaError(insufficient_ranking) if the ranking has fewer than m entries.
SparseVector top_m_centroid(const RankedList& ranking, std::span<const Document> docs, int m, const TermStats& stats);

double st_feature(std::string_view sentence, const RankedList& ranking, std::span<const Document> docs, int m,
                  const TermStats& stats);

struct CandidateSentence {
  std::string text;
  std::string provenance;  // id of the document it comes from

  friend bool operator==(const CandidateSentence&, const CandidateSentence&) = default;
};

/// Sentences of every document other than `doc`, in ranking order.
std::vector<CandidateSentence> competitor_sentences(const Document& doc, const RankedList& ranking,
                                                    std::span<const Document> docs);

/// all: every other document; better: strictly higher-ranked documents;
/// best: the rank-1 document unless that is `doc`.
std::vector<CandidateSentence> semantic_candidates(const Document& doc, const RankedList& ranking,
                                                   std::span<const Document> docs, CandidateStrategy strategy);

// ---------------------------------------------------------------------------
// Pair scoring kernel

struct PairScore {
  int source = 0;
  std::size_t target = 0;
  bool admitted = false;
  double score = 0.0;
};

/// All (source sentence, candidate target) pairs of one proposal step.
struct PairTable {
  std::vector<std::string> sources;
  std::vector<CandidateSentence> targets;
  std::vector<PairScore> pairs;  // row-major: source * targets.size() + target
};

PairTable lexical_pair_table(const Document& doc, const Query& query, const RankedList& ranking,
                             std::span<const Document> docs, const LexicalAgentParams& params, const TermStats& stats,
                             Execution exec = Execution::parallel);

PairTable semantic_pair_table(const Document& doc, const Query& query, const RankedList& ranking,
                              std::span<const Document> docs, const SemanticAgentParams& params,
                              const Embedder& embedder, const EntailmentModel& nli,
                              Execution exec = Execution::parallel);

/// Best admitted pair whose replacement keeps the document within max_terms.
/// Order: score descending, then source index, then target text, then
/// provenance. nullopt when no admitted pair yields a valid document.
std::optional<ModificationProposal> select_proposal(const Document& doc, const PairTable& table,
                                                    int max_terms = kDefaultMaxTerms);

std::optional<ModificationProposal> lexical_propose(const Document& doc, const Query& query, const RankedList& ranking,
                                                    std::span<const Document> docs, const LexicalAgentParams& params,
                                                    const TermStats& stats, int max_terms = kDefaultMaxTerms,
                                                    Execution exec = Execution::parallel);

std::optional<ModificationProposal> semantic_propose(const Document& doc, const Query& query,
                                                     const RankedList& ranking, std::span<const Document> docs,
                                                     const SemanticAgentParams& params, const Embedder& embedder,
                                                     const EntailmentModel& nli, int max_terms = kDefaultMaxTerms,
                                                     Execution exec = Execution::parallel);

/// Replaces the source sentence with the target. Throws
/// ArenaError(term_limit_exceeded) if the result exceeds max_terms and
/// ArenaError(invalid_argument) for an out-of-range index or empty target.
Document apply_proposal(const Document& doc, const ModificationProposal& proposal, int max_terms = kDefaultMaxTerms);

// ---------------------------------------------------------------------------
// Rewriting agents

/// Ranked documents of one round, as shown to an LLM agent.
struct RankedSnapshot {
  int round = 0;
  RankedList ranking;
  std::map<std::string, std::string> texts;  // doc_id -> text
};

/// Prompt for one rewrite. pair: two competitor documents of the current
/// round drawn from `rng`, with their ranks; all: the full current ranking.
/// Earlier ranks of the agent's own document are listed from `history`.
std::string build_rewrite_prompt(const Document& doc, const Query& query, std::span<const RankedSnapshot> history,
                                 const RankedSnapshot& current, const LlmAgentParams& params, Rng& rng);

/// Keeps the text up to and including its max_terms-th counted term.
std::string truncate_to_terms(std::string_view text, int max_terms);

/// Generates a rewrite. Output is trimmed with control characters blanked; an
/// over-long answer is retried once with a stricter instruction and then
/// truncated to max_terms; an empty answer keeps the current text.
std::string llm_propose(const Document& doc, const Query& query, std::span<const RankedSnapshot> history,
                        const RankedSnapshot& current, const LlmAgentParams& params, const TextGenerator& generator,
                        Rng& rng, int max_terms = kDefaultMaxTerms);

inline std::string static_propose(const Document& doc) { return doc.text; }

// ---------------------------------------------------------------------------
// Agents as used by the competition engine

struct AgentView {
  const Document& own;
  const Query& query;
  const RankedList& ranking;
  std::span<const Document> documents;  // every current document, own included
  std::span<const RankedSnapshot> history;
  const TermStats& stats;
  const ProviderRegistry* providers = nullptr;
  int max_terms = kDefaultMaxTerms;
  Execution exec = Execution::serial;
};

struct AgentAction {
  std::string text;
  std::optional<ModificationProposal> proposal;
};

class DocumentAgent {
 public:
  virtual ~DocumentAgent() = default;
  virtual const AgentId& id() const = 0;
  virtual AgentAction act(const AgentView& view, Rng& rng) const = 0;
};

using DocumentAgentParams = std::variant<std::monostate, LexicalAgentParams, SemanticAgentParams, LlmAgentParams>;

struct DocumentAgentSpec {
  std::string name;
  AgentKind kind = AgentKind::static_agent;
  DocumentAgentParams params;

  AgentId id() const;
  void validate() const;
};

/// Throws ArenaError(config_error) for kinds without an agent (human) or
/// params of the wrong type.
std::unique_ptr<DocumentAgent> make_document_agent(const DocumentAgentSpec& spec);

}  // namespace arena
