// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/rankers.hpp"

#include <map>
#include <set>

#include "arena/error.hpp"

namespace arena {

std::string_view to_string(RankerKind kind) {
  switch (kind) {
    case RankerKind::bm25: return "bm25";
    case RankerKind::tfidf_sum: return "tfidf_sum";
    case RankerKind::semantic: return "semantic";
    case RankerKind::llm: return "llm";
  }
  return "bm25";
}

RankerKind parse_ranker_kind(std::string_view name) {
  if (name == "bm25") return RankerKind::bm25;
  if (name == "tfidf_sum" || name == "tfidf") return RankerKind::tfidf_sum;
  if (name == "semantic") return RankerKind::semantic;
  if (name == "llm") return RankerKind::llm;
  fail(ErrorCode::config_error, "unknown ranker kind '" + std::string(name) + "'");
}

AgentKind ranker_family(RankerKind kind) {
  switch (kind) {
    case RankerKind::bm25:
    case RankerKind::tfidf_sum: return AgentKind::lexical;
    case RankerKind::semantic: return AgentKind::semantic;
    case RankerKind::llm: return AgentKind::llm;
  }
  return AgentKind::lexical;
}

void RankerSpec::validate() const {
  if (kind == RankerKind::bm25) {
    if (!(k1 > 0.0)) fail(ErrorCode::config_error, "ranker " + name + ": k1 must be > 0");
    if (!(b >= 0.0 && b <= 1.0)) fail(ErrorCode::config_error, "ranker " + name + ": b must be in [0, 1]");
  }
  if ((kind == RankerKind::semantic || kind == RankerKind::llm) && provider.empty()) {
    fail(ErrorCode::config_error, "ranker " + name + " needs a provider tag");
  }
}

double bm25_score(std::span<const std::string> query_tokens, std::span<const std::string> doc_tokens,
                  const TermStats& stats, double k1, double b) {
  if (stats.doc_count() == 0) fail(ErrorCode::invalid_argument, "bm25 needs statistics over >= 1 document");
  std::map<std::string, int> tf;
  for (const auto& t : doc_tokens) ++tf[t];
  const double len = static_cast<double>(doc_tokens.size());
  const double avg = stats.avg_doc_len() > 0.0 ? stats.avg_doc_len() : 1.0;
  const double norm = k1 * (1.0 - b + b * len / avg);
  double score = 0.0;
  for (const auto& term : std::set<std::string>(query_tokens.begin(), query_tokens.end())) {
    auto it = tf.find(term);
    if (it == tf.end()) continue;
    const double f = it->second;
    score += stats.idf(term) * f * (k1 + 1.0) / (f + norm);
  }
  return score;
}

double tfidf_sum_score(std::span<const std::string> query_tokens, std::span<const std::string> doc_tokens,
                       const TermStats& stats) {
  if (stats.doc_count() == 0) fail(ErrorCode::invalid_argument, "tf.idf needs statistics over >= 1 document");
  std::map<std::string, int> tf;
  for (const auto& t : doc_tokens) ++tf[t];
  double score = 0.0;
  for (const auto& term : std::set<std::string>(query_tokens.begin(), query_tokens.end())) {
    auto it = tf.find(term);
    if (it != tf.end()) score += it->second * stats.idf(term);
  }
  return score;
}

double semantic_score(const std::string& query, const std::string& doc, const Embedder& embedder) {
  const std::string texts[2] = {query, doc};
  const auto v = embedder.embed(texts);
  if (v.size() != 2) fail(ErrorCode::malformed_response, "embedder returned the wrong number of vectors");
  return cosine(v[0].values, v[1].values);
}

double llm_pointwise_score(const std::string& query, const std::string& doc, const RelevanceModel& model) {
  return model.relevance_score(query, doc);
}

TermStats stats_of(std::span<const Document> docs) {
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(docs.size());
  for (const auto& d : docs) tokens.push_back(tokenize(d.text));
  return compute_term_stats(tokens);
}

std::vector<double> score_documents(const Query& query, std::span<const Document> docs, const RankerSpec& ranker,
                                    const RankingResources& resources, Execution exec) {
  if (docs.empty()) fail(ErrorCode::invalid_argument, "rank needs at least one document");
  {
    std::set<std::string> ids;
    for (const auto& d : docs) {
      if (!ids.insert(d.id).second) fail(ErrorCode::invalid_argument, "duplicate document id " + d.id);
    }
  }
  std::vector<double> scores(docs.size(), 0.0);

  switch (ranker.kind) {
    case RankerKind::bm25:
    case RankerKind::tfidf_sum: {
      std::vector<std::vector<std::string>> tokens(docs.size());
      for_each_index(docs.size(), exec, [&](std::size_t i) { tokens[i] = tokenize(docs[i].text); });
      TermStats local;
      const TermStats* stats = resources.background;
      if (stats == nullptr) {
        local = compute_term_stats(tokens);
        stats = &local;
      }
      const auto q = tokenize(query.text);
      for_each_index(docs.size(), exec, [&](std::size_t i) {
        scores[i] = ranker.kind == RankerKind::bm25 ? bm25_score(q, tokens[i], *stats, ranker.k1, ranker.b)
                                                    : tfidf_sum_score(q, tokens[i], *stats);
      });
      break;
    }
    case RankerKind::semantic: {
      if (resources.providers == nullptr) fail(ErrorCode::config_error, "semantic ranker without providers");
      const Embedder& embedder = resources.providers->embedder(ranker.provider);
      std::vector<std::string> texts;
      texts.reserve(docs.size() + 1);
      texts.push_back(query.text);
      for (const auto& d : docs) texts.push_back(d.text);
      const auto vectors = embedder.embed(texts);
      if (vectors.size() != texts.size()) fail(ErrorCode::malformed_response, "embedder returned the wrong number of vectors");
      for_each_index(docs.size(), exec,
                     [&](std::size_t i) { scores[i] = cosine(vectors[0].values, vectors[i + 1].values); });
      break;
    }
    case RankerKind::llm: {
      if (resources.providers == nullptr) fail(ErrorCode::config_error, "llm ranker without providers");
      const RelevanceModel& model = resources.providers->relevance(ranker.provider);
      for_each_index(docs.size(), exec,
                     [&](std::size_t i) { scores[i] = llm_pointwise_score(query.text, docs[i].text, model); });
      break;
    }
  }
  return scores;
}

RankedList rank(const Query& query, std::span<const Document> docs, const RankerSpec& ranker,
                const RankingResources& resources, int round, Execution exec) {
  const auto scores = score_documents(query, docs, ranker, resources, exec);
  std::vector<RankEntry> entries;
  entries.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) entries.push_back({docs[i].id, scores[i]});
  return make_ranked_list(query.id, round, std::move(entries));
}

}  // namespace arena
