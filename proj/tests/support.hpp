// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

// Generators and brute-force oracles shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arena/core.hpp"
#include "arena/doc_agents.hpp"
#include "arena/providers.hpp"
#include "arena/rng.hpp"
#include "arena/textproc.hpp"

namespace arena::testing {

inline const std::vector<std::string>& small_vocab() {
  static const std::vector<std::string> v = {"cheap", "flights", "london", "hotel", "rooms", "price", "city",
                                             "travel", "deals", "booking", "the", "of", "and", "to",
                                             "best", "guide", "summer", "train", "airport", "review"};
  return v;
}

inline std::string random_sentence(Rng& rng, int min_len = 2, int max_len = 7) {
  const auto& v = small_vocab();
  const int n = min_len + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len - min_len + 1)));
  std::string s;
  for (int i = 0; i < n; ++i) {
    std::string w = v[rng.below(v.size())];
    if (i == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    s += (i ? " " : "") + w;
  }
  return s + ".";
}

inline std::string random_text(Rng& rng, int max_sentences) {
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_sentences)));
  std::string t;
  for (int i = 0; i < n; ++i) t += (i ? " " : "") + random_sentence(rng);
  return t;
}

inline Document make_doc(std::string id, std::string text, AgentKind kind = AgentKind::human,
                         std::string topic = "t1") {
  return Document{std::move(id), std::move(topic), AgentId{kind, "", ""}, std::move(text), 1};
}

inline Query make_query(std::string text, std::string id = "t1/q1") {
  return Query{std::move(id), "t1", std::move(text), AgentId{AgentKind::human, "", ""}};
}

/// A competition snapshot: documents plus a random ranking over them.
struct Instance {
  std::vector<Document> docs;
  Query query;
  RankedList ranking;
};

inline Instance random_instance(Rng& rng, int max_docs = 5, int max_sentences = 6) {
  Instance in;
  const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_docs - 1)));
  for (int i = 0; i < n; ++i) {
    std::string text;
    // Now and then copy a sentence of an earlier document to create exact ties.
    if (i > 0 && rng.below(4) == 0) {
      auto sents = split_sentences(in.docs[rng.below(in.docs.size())].text);
      text = sents[rng.below(sents.size())] + " " + random_text(rng, max_sentences - 1);
    } else {
      text = random_text(rng, max_sentences);
    }
    in.docs.push_back(make_doc("d" + std::to_string(i), text));
  }
  const auto& v = small_vocab();
  std::string q = v[rng.below(v.size())];
  if (rng.below(2)) q += " " + v[rng.below(v.size())];
  in.query = make_query(q);
  std::vector<RankEntry> entries;
  auto order = rng.sample_indices(in.docs.size(), in.docs.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    entries.push_back({in.docs[order[r]].id, static_cast<double>(order.size() - r)});
  }
  in.ranking = make_ranked_list(in.query.id, 1, entries);
  return in;
}

// ---------------------------------------------------------------------------
// Dense-vector oracles. Summations run over terms in sorted order, the same
// order the sparse implementation uses, so equal inputs give equal bits.

struct DenseStats {
  double n = 0;
  std::map<std::string, double> df;

  double idf(const std::string& t) const {
    auto it = df.find(t);
    return std::log((n + 1.0) / ((it == df.end() ? 0.0 : it->second) + 0.5));
  }
};

inline DenseStats dense_stats(const std::vector<std::vector<std::string>>& docs) {
  DenseStats s;
  s.n = static_cast<double>(docs.size());
  for (const auto& d : docs) {
    std::set<std::string> u(d.begin(), d.end());
    for (const auto& t : u) s.df[t] += 1.0;
  }
  return s;
}

using Dense = std::map<std::string, double>;

inline Dense dense_tfidf(const std::vector<std::string>& toks, const DenseStats& s) {
  Dense v;
  for (const auto& t : toks) v[t] += 1.0;
  for (auto& [t, w] : v) w = w * s.idf(t);
  return v;
}

inline double dense_cos(const Dense& a, const Dense& b) {
  std::set<std::string> all;
  for (auto& [t, w] : a) all.insert(t);
  for (auto& [t, w] : b) all.insert(t);
  double dot = 0, na = 0, nb = 0;
  for (const auto& t : all) {
    const double x = a.contains(t) ? a.at(t) : 0.0;
    const double y = b.contains(t) ? b.at(t) : 0.0;
    if (x != 0.0 && y != 0.0) dot += x * y;
    if (x != 0.0) na += x * x;
    if (y != 0.0) nb += y * y;
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (na * nb);
}

inline std::vector<std::string> words(const std::string& s) { return tokenize(s); }

struct OracleCandidate {
  int source;
  std::string target;
  std::string provenance;
  double score;
};

inline bool oracle_before(const OracleCandidate& x, const OracleCandidate& y) {
  if (x.score != y.score) return x.score > y.score;
  if (x.source != y.source) return x.source < y.source;
  if (x.target != y.target) return x.target < y.target;
  return x.provenance < y.provenance;
}

inline std::optional<OracleCandidate> oracle_pick(std::vector<OracleCandidate> c, const Document& doc,
                                                  int max_terms) {
  std::sort(c.begin(), c.end(), oracle_before);
  const auto sents = split_sentences(doc.text);
  const long total = static_cast<long>(words(doc.text).size());
  for (const auto& x : c) {
    const long after = total - static_cast<long>(words(sents[static_cast<std::size_t>(x.source)]).size()) +
                       static_cast<long>(words(x.target).size());
    if (after <= max_terms) return x;
  }
  return std::nullopt;
}

inline std::vector<std::pair<std::string, std::string>> oracle_targets(const Instance& in, const Document& self,
                                                                       CandidateStrategy strategy) {
  std::vector<std::pair<std::string, std::string>> out;  // (text, provenance)
  const int own = *in.ranking.rank_of(self.id);
  for (std::size_t r = 0; r < in.ranking.size(); ++r) {
    const auto& id = in.ranking.entries[r].doc_id;
    if (id == self.id) continue;
    const int rank = static_cast<int>(r) + 1;
    if (strategy == CandidateStrategy::better && rank >= own) continue;
    if (strategy == CandidateStrategy::best && (rank != 1 || own == 1)) continue;
    for (const auto& d : in.docs) {
      if (d.id != id) continue;
      for (auto& s : split_sentences(d.text)) out.emplace_back(s, id);
    }
  }
  return out;
}

/// Exhaustive argmax of score_lex over all (own sentence, competitor sentence) pairs.
inline std::optional<OracleCandidate> lexical_oracle(const Instance& in, const Document& self,
                                                     const LexicalAgentParams& p, int max_terms) {
  std::vector<std::vector<std::string>> all;
  for (const auto& d : in.docs) all.push_back(words(d.text));
  const DenseStats st = dense_stats(all);
  const auto q = words(in.query.text);

  Dense centroid;
  for (int i = 0; i < p.m; ++i) {
    const auto& id = in.ranking.entries[static_cast<std::size_t>(i)].doc_id;
    for (const auto& d : in.docs) {
      if (d.id != id) continue;
      for (auto& [t, w] : dense_tfidf(words(d.text), st)) centroid[t] += w;
    }
  }
  for (auto& [t, w] : centroid) w = w / static_cast<double>(p.m);

  auto qt = [&](const std::vector<std::string>& toks) {
    double hits = 0;
    for (const auto& t : toks) hits += std::count(q.begin(), q.end(), t) > 0 ? 1.0 : 0.0;
    return hits / static_cast<double>(toks.size());
  };

  std::vector<OracleCandidate> cands;
  const auto sources = split_sentences(self.text);
  for (const auto& [target, prov] : oracle_targets(in, self, CandidateStrategy::all)) {
    const auto tt = words(target);
    if (tt.empty()) continue;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const auto ts = words(sources[s]);
      if (ts.empty()) continue;
      const Dense vs = dense_tfidf(ts, st), vt = dense_tfidf(tt, st);
      if (!(dense_cos(vs, vt) > p.eta)) continue;
      const double score = p.lambda * (qt(tt) - qt(ts)) +
                           (1.0 - p.lambda) * (dense_cos(vt, centroid) - dense_cos(vs, centroid));
      cands.push_back({static_cast<int>(s), target, prov, score});
    }
  }
  return oracle_pick(std::move(cands), self, max_terms);
}

inline double span_cos(const EmbeddingVector& a, const EmbeddingVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Exhaustive argmax of score_sem over the strategy's candidate pairs.
inline std::optional<OracleCandidate> semantic_oracle(const Instance& in, const Document& self,
                                                      const SemanticAgentParams& p, const Embedder& emb,
                                                      const EntailmentModel& nli, int max_terms) {
  const auto eq = emb.embed_one(in.query.text);
  std::vector<OracleCandidate> cands;
  const auto sources = split_sentences(self.text);
  for (const auto& [target, prov] : oracle_targets(in, self, p.strategy)) {
    const auto et = emb.embed_one(target);
    for (std::size_t s = 0; s < sources.size(); ++s) {
      if (!(nli.entailment_prob(target, sources[s]) > p.eta)) continue;
      const auto es = emb.embed_one(sources[s]);
      const double affinity = p.source_query_affinity ? span_cos(es, eq) : span_cos(et, eq);
      const double score = p.lambda * span_cos(es, et) + (1.0 - p.lambda) * affinity;
      cands.push_back({static_cast<int>(s), target, prov, score});
    }
  }
  return oracle_pick(std::move(cands), self, max_terms);
}

inline bool same_pick(const std::optional<OracleCandidate>& o, const std::optional<ModificationProposal>& p) {
  if (!o || !p) return !o && !p;
  return o->source == p->source_sentence_index && o->target == p->target_sentence &&
         o->provenance == p->provenance;
}

// ---------------------------------------------------------------------------
// Scoring oracles written straight from the formulas.

inline double bm25_oracle(const std::vector<std::string>& q, const std::vector<std::string>& d,
                          const std::vector<std::vector<std::string>>& coll, double k1, double b) {
  double total = 0;
  for (const auto& x : coll) total += static_cast<double>(x.size());
  const double avg = total / static_cast<double>(coll.size());
  std::set<std::string> distinct(q.begin(), q.end());
  double score = 0;
  for (const auto& t : distinct) {
    double df = 0;
    for (const auto& x : coll) df += std::find(x.begin(), x.end(), t) != x.end() ? 1.0 : 0.0;
    const double idf = std::log((static_cast<double>(coll.size()) + 1.0) / (df + 0.5));
    const double tf = static_cast<double>(std::count(d.begin(), d.end(), t));
    if (tf == 0) continue;
    score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * static_cast<double>(d.size()) / avg));
  }
  return score;
}

inline double tfidf_sum_oracle(const std::vector<std::string>& q, const std::vector<std::string>& d,
                               const std::vector<std::vector<std::string>>& coll) {
  std::set<std::string> distinct(q.begin(), q.end());
  double score = 0;
  for (const auto& t : distinct) {
    double df = 0;
    for (const auto& x : coll) df += std::find(x.begin(), x.end(), t) != x.end() ? 1.0 : 0.0;
    score += static_cast<double>(std::count(d.begin(), d.end(), t)) *
             std::log((static_cast<double>(coll.size()) + 1.0) / (df + 0.5));
  }
  return score;
}

}  // namespace arena::testing
