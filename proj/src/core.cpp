// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/core.hpp"

#include <algorithm>
#include <set>

#include "arena/error.hpp"
#include "arena/textproc.hpp"

namespace arena {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::human: return "human";
    case AgentKind::lexical: return "lexical";
    case AgentKind::semantic: return "semantic";
    case AgentKind::llm: return "llm";
    case AgentKind::static_agent: return "static";
  }
  return "human";
}

AgentKind parse_agent_kind(std::string_view name) {
  if (name == "human") return AgentKind::human;
  if (name == "lexical") return AgentKind::lexical;
  if (name == "semantic") return AgentKind::semantic;
  if (name == "llm") return AgentKind::llm;
  if (name == "static") return AgentKind::static_agent;
  fail(ErrorCode::invalid_argument, "unknown agent kind '" + std::string(name) + "'");
}

std::string AgentId::key() const {
  return std::string(to_string(kind)) + ":" + model_tag + ":" + params_digest;
}

const std::map<std::string, int>* Topic::grades_for(const std::string& query_id) const {
  if (auto it = judgments.find(query_id); it != judgments.end()) return &it->second;
  if (auto it = judgments.find(id); it != judgments.end()) return &it->second;
  return nullptr;
}

std::string_view to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::human: return "human";
    case CorpusKind::llm: return "llm";
    case CorpusKind::mixed: return "mixed";
  }
  return "human";
}

CorpusKind parse_corpus_kind(std::string_view name) {
  if (name == "human") return CorpusKind::human;
  if (name == "llm") return CorpusKind::llm;
  if (name == "mixed") return CorpusKind::mixed;
  fail(ErrorCode::invalid_argument, "unknown corpus kind '" + std::string(name) + "'");
}

Corpus build_corpus(std::vector<Document> docs, CorpusKind kind) {
  if (docs.empty()) fail(ErrorCode::empty_input, "a corpus needs at least one document");
  bool has_human = false;
  bool has_llm = false;
  for (const auto& d : docs) {
    const AgentKind k = d.author.kind;
    has_human = has_human || k == AgentKind::human;
    has_llm = has_llm || k == AgentKind::llm;
    if (kind == CorpusKind::human && k != AgentKind::human) {
      fail(ErrorCode::kind_mismatch, "document " + d.id + " is not human-authored");
    }
    if (kind == CorpusKind::llm && k != AgentKind::llm) {
      fail(ErrorCode::kind_mismatch, "document " + d.id + " is not llm-authored");
    }
    if (kind == CorpusKind::mixed && k != AgentKind::human && k != AgentKind::llm) {
      fail(ErrorCode::kind_mismatch, "document " + d.id + " has author kind " +
                                         std::string(to_string(k)));
    }
  }
  if (kind == CorpusKind::mixed && !(has_human && has_llm)) {
    fail(ErrorCode::kind_mismatch, "a mixed corpus needs both human and llm documents");
  }
  return Corpus{kind, std::move(docs)};
}

std::optional<int> RankedList::rank_of(std::string_view doc_id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].doc_id == doc_id) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

RankedList make_ranked_list(std::string query_id, int round, std::vector<RankEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  return RankedList{std::move(query_id), round, std::move(entries)};
}

bool satisfies_ranking_invariants(const RankedList& list, std::span<const std::string> doc_ids) {
  if (list.entries.size() != doc_ids.size()) return false;
  std::multiset<std::string> expected(doc_ids.begin(), doc_ids.end());
  std::multiset<std::string> got;
  for (const auto& e : list.entries) got.insert(e.doc_id);
  if (expected != got) return false;
  if (std::set<std::string>(got.begin(), got.end()).size() != got.size()) return false;
  for (std::size_t i = 1; i < list.entries.size(); ++i) {
    const auto& prev = list.entries[i - 1];
    const auto& cur = list.entries[i];
    if (cur.score > prev.score) return false;
    if (cur.score == prev.score && !(prev.doc_id < cur.doc_id)) return false;
  }
  return true;
}

std::size_t count_terms(std::string_view text) { return tokenize(text).size(); }

ValidationResult validate_text(std::string_view text, int max_terms, std::string_view forbidden) {
  ValidationResult result;
  const std::size_t terms = count_terms(text);
  if (terms == 0) result.violations.emplace_back("empty_document");
  if (static_cast<long long>(terms) > max_terms) result.violations.emplace_back("term_limit");
  bool plaintext = true;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if ((c < 0x20 && c != '\n' && c != '\t') || forbidden.find(ch) != std::string_view::npos) {
      plaintext = false;
      break;
    }
  }
  if (!plaintext) result.violations.emplace_back("not_plaintext");
  return result;
}

ValidationResult validate_document(const Document& doc, int max_terms, std::string_view forbidden) {
  return validate_text(doc.text, max_terms, forbidden);
}

int CompetitionLog::rank_of(const std::string& slot, int round, std::size_t query_index) const {
  if (round < 1 || static_cast<std::size_t>(round) > rounds.size()) {
    fail(ErrorCode::invalid_argument, "round " + std::to_string(round) + " not in log");
  }
  const RoundRecord& rec = rounds[static_cast<std::size_t>(round) - 1];
  auto doc = rec.documents.find(slot);
  if (doc == rec.documents.end()) fail(ErrorCode::unknown_agent, "slot " + slot + " not in round");
  if (query_index >= rec.rankings.size()) fail(ErrorCode::invalid_argument, "query index out of range");
  auto r = rec.rankings[query_index].rank_of(doc->second.id);
  if (!r) fail(ErrorCode::unknown_agent, "document of slot " + slot + " not ranked");
  return *r;
}

CompetitionLog snapshot_round(CompetitionLog log, std::vector<RankedList> rankings,
                              std::map<std::string, Document> documents,
                              std::map<std::string, std::optional<ModificationProposal>> proposals) {
  const int index = static_cast<int>(log.rounds.size()) + 1;

  std::vector<RankedList> ordered;
  ordered.reserve(log.queries.size());
  for (const auto& q : log.queries) {
    auto it = std::find_if(rankings.begin(), rankings.end(),
                           [&](const RankedList& r) { return r.query_id == q.id; });
    if (it == rankings.end()) fail(ErrorCode::incomplete_round, "no ranking for query " + q.id);
    ordered.push_back(std::move(*it));
    ordered.back().round = index;
  }

  for (const auto& p : log.participants) {
    if (!documents.contains(p.slot)) fail(ErrorCode::incomplete_round, "no document for slot " + p.slot);
    proposals.try_emplace(p.slot, std::nullopt);
  }
  if (documents.size() != log.participants.size()) {
    fail(ErrorCode::incomplete_round, "documents for slots outside the roster");
  }
  for (const auto& [slot, _] : proposals) {
    if (!documents.contains(slot)) fail(ErrorCode::incomplete_round, "proposal for unknown slot " + slot);
  }

  log.rounds.push_back(RoundRecord{index, std::move(ordered), std::move(documents), std::move(proposals)});
  return log;
}

}  // namespace arena
