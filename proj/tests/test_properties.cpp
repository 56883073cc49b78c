// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized invariants. Each generator is seeded so failures replay.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "arena/doc_agents.hpp"
#include "arena/log_io.hpp"
#include "arena/metrics.hpp"
#include "arena/rankers.hpp"
#include "arena/sim.hpp"
#include "support.hpp"

namespace arena {
namespace {

using testing::random_instance;
using testing::random_text;

TEST(Property, TokenizeIsIdempotent) {
  Rng rng(101);
  const std::string noise = ".,;:!?\"'()-";
  for (int i = 0; i < 300; ++i) {
    std::string text = random_text(rng, 5);
    for (int k = 0; k < 5; ++k) text.insert(rng.below(text.size() + 1), 1, noise[rng.below(noise.size())]);
    const auto toks = tokenize(text);
    std::string joined;
    for (const auto& t : toks) joined += t + " ";
    EXPECT_EQ(tokenize(joined), toks) << text;
    for (const auto& t : toks) EXPECT_FALSE(t.empty());
  }
}

TEST(Property, SentenceSpansAreOrderedAndDisjoint) {
  Rng rng(102);
  for (int i = 0; i < 300; ++i) {
    const std::string text = random_text(rng, 8);
    const auto spans = sentence_spans(text);
    std::size_t prev = 0;
    for (const auto& s : spans) {
      EXPECT_LE(prev, s.begin);
      EXPECT_LT(s.begin, s.end);
      EXPECT_LE(s.end, text.size());
      prev = s.end;
    }
    EXPECT_EQ(split_sentences(text).size(), spans.size());
  }
}

TEST(Property, CosineSymmetricAndBounded) {
  Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::vector<std::string>> coll;
    for (int d = 0; d < 4; ++d) coll.push_back(tokenize(random_text(rng, 3)));
    const auto stats = compute_term_stats(coll);
    const auto a = tfidf_vector(coll[0], stats), b = tfidf_vector(coll[1], stats);
    const double ab = cosine(a, b);
    EXPECT_EQ(ab, cosine(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    if (a.norm() > 0) EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  }
}

TEST(Property, RankingIsPermutationWithNonIncreasingScores) {
  Rng rng(104);
  const auto reg = ProviderRegistry::local_stubs(0);
  const RankerSpec specs[] = {{"bm25", RankerKind::bm25, 1.2, 0.75, ""},
                              {"tfidf", RankerKind::tfidf_sum, 1.2, 0.75, ""},
                              {"e5", RankerKind::semantic, 1.2, 0.75, "stub-e5"}};
  for (int i = 0; i < 150; ++i) {
    const auto in = random_instance(rng, 8);
    const auto& spec = specs[rng.below(3)];
    const auto r = rank(in.query, in.docs, spec, RankingResources{&reg, nullptr}, 1);
    ASSERT_EQ(r.entries.size(), in.docs.size());
    std::set<std::string> ids;
    for (std::size_t k = 0; k < r.entries.size(); ++k) {
      ids.insert(r.entries[k].doc_id);
      if (k > 0) {
        EXPECT_GE(r.entries[k - 1].score, r.entries[k].score);
        if (r.entries[k - 1].score == r.entries[k].score) EXPECT_LT(r.entries[k - 1].doc_id, r.entries[k].doc_id);
      }
    }
    EXPECT_EQ(ids.size(), in.docs.size());
  }
}

TEST(Property, SelectedProposalKeepsDocumentValid) {
  Rng rng(105);
  for (int i = 0; i < 200; ++i) {
    const auto in = random_instance(rng);
    const auto& self = in.docs[rng.below(in.docs.size())];
    std::vector<std::vector<std::string>> coll;
    for (const auto& d : in.docs) coll.push_back(tokenize(d.text));
    const auto stats = compute_term_stats(coll);
    const int own = static_cast<int>(tokenize(self.text).size());
    const int max_terms = own + static_cast<int>(rng.below(3));
    const auto p = lexical_propose(self, in.query, in.ranking, in.docs, LexicalAgentParams{0.5, 2, 0.0}, stats,
                                   max_terms, Execution::serial);
    if (!p) continue;
    const auto next = apply_proposal(self, *p, max_terms);
    EXPECT_LE(static_cast<int>(tokenize(next.text).size()), max_terms);
    EXPECT_EQ(split_sentences(next.text)[static_cast<std::size_t>(p->source_sentence_index)], p->target_sentence);
    EXPECT_EQ(next.id, self.id);
  }
}

TEST(Property, CandidateSetsAreNested) {
  Rng rng(110);
  for (int i = 0; i < 200; ++i) {
    const auto in = random_instance(rng);
    const auto& self = in.docs[rng.below(in.docs.size())];
    const auto all = semantic_candidates(self, in.ranking, in.docs, CandidateStrategy::all);
    const auto better = semantic_candidates(self, in.ranking, in.docs, CandidateStrategy::better);
    const auto best = semantic_candidates(self, in.ranking, in.docs, CandidateStrategy::best);
    auto contains = [](const std::vector<CandidateSentence>& big, const CandidateSentence& c) {
      return std::any_of(big.begin(), big.end(), [&](const CandidateSentence& b) {
        return b.text == c.text && b.provenance == c.provenance;
      });
    };
    for (const auto& c : best) EXPECT_TRUE(contains(better, c));
    for (const auto& c : better) EXPECT_TRUE(contains(all, c));
  }
}

TEST(Property, ArgmaxIgnoresConstantShift) {
  Rng rng(111);
  for (int i = 0; i < 200; ++i) {
    const auto in = random_instance(rng);
    const auto& self = in.docs[rng.below(in.docs.size())];
    std::vector<std::vector<std::string>> coll;
    for (const auto& d : in.docs) coll.push_back(tokenize(d.text));
    auto table = lexical_pair_table(self, in.query, in.ranking, in.docs, LexicalAgentParams{rng.unit(), 2, 0.0},
                                    compute_term_stats(coll), Execution::serial);
    const auto before = select_proposal(self, table);
    const double shift = 0.25 + rng.unit();
    for (auto& p : table.pairs) p.score += shift;
    const auto after = select_proposal(self, table);
    ASSERT_EQ(before.has_value(), after.has_value());
    if (before) {
      EXPECT_EQ(before->source_sentence_index, after->source_sentence_index);
      EXPECT_EQ(before->target_sentence, after->target_sentence);
      EXPECT_EQ(before->provenance, after->provenance);
    }
  }
}

TEST(Property, PromotionBoundedAndZeroWhenUnchanged) {
  for (int n = 2; n <= 12; ++n) {
    for (int a = 1; a <= n; ++a) {
      EXPECT_EQ(scaled_rank_promotion(a, a, n), 0.0);
      for (int b = 1; b <= n; ++b) {
        const double v = scaled_rank_promotion(a, b, n);
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
        if (b < a) EXPECT_GT(v, 0.0);
        if (b > a) EXPECT_LT(v, 0.0);
      }
    }
  }
}

TEST(Property, NdcgWithinUnitInterval) {
  Rng rng(106);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<RankEntry> e;
    std::map<std::string, int> grades;
    for (std::size_t k = 0; k < n; ++k) {
      e.push_back({"d" + std::to_string(k), rng.unit()});
      grades["d" + std::to_string(k)] = static_cast<int>(rng.below(4));
    }
    const auto r = make_ranked_list("q", 1, e);
    const double v = ndcg_at_1(r, grades);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    const int best = std::max_element(grades.begin(), grades.end(), [](auto& x, auto& y) { return x.second < y.second; })->second;
    EXPECT_EQ(v == 1.0, grades.at(r.entries[0].doc_id) == best);
  }
}

TEST(Property, BonferroniMonotoneAndCapped) {
  Rng rng(107);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> p(1 + rng.below(8));
    for (auto& x : p) x = rng.unit();
    const int m = static_cast<int>(p.size() + rng.below(5));
    const auto adj = bonferroni(p, m);
    for (std::size_t k = 0; k < p.size(); ++k) {
      EXPECT_GE(adj[k], p[k]);
      EXPECT_LE(adj[k], 1.0);
      for (std::size_t l = 0; l < p.size(); ++l) {
        if (p[k] <= p[l]) EXPECT_LE(adj[k], adj[l]);
      }
    }
  }
}

TEST(Property, TTestSignFollowsMeanDifference) {
  Rng rng(108);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<double> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = rng.unit();
      b[k] = rng.unit();
    }
    const auto r = paired_t_test(a, b);
    double diff = 0;
    for (std::size_t k = 0; k < n; ++k) diff += a[k] - b[k];
    if (diff > 1e-12) EXPECT_GT(r.t, 0.0);
    if (diff < -1e-12) EXPECT_LT(r.t, 0.0);
    EXPECT_GE(r.p, 0.0);
    EXPECT_LE(r.p, 1.0);
    const auto swapped = paired_t_test(b, a);
    EXPECT_EQ(swapped.t, -r.t);
    EXPECT_EQ(swapped.p, r.p);
  }
}

TEST(Property, RandomCompetitionsRoundTripThroughLog) {
  Rng rng(109);
  const auto reg = ProviderRegistry::local_stubs(0);
  for (int i = 0; i < 20; ++i) {
    const auto in = random_instance(rng, 5);
    SimulationConfig c;
    c.rounds = 1 + static_cast<int>(rng.below(4));
    c.ranker = {"bm25", RankerKind::bm25, 1.2, 0.75, ""};
    c.queries = {in.query};
    c.seed = rng.next();
    for (std::size_t k = 0; k < in.docs.size(); ++k) {
      if (rng.below(2) == 0) {
        c.agents.push_back({"lex", AgentKind::lexical, LexicalAgentParams{rng.unit(), 2, 0.0}});
      } else {
        c.agents.push_back({"static", AgentKind::static_agent, {}});
      }
    }
    const auto log = run_competition(c, in.docs, {&reg, nullptr, Execution::parallel, {}});
    ASSERT_EQ(log.rounds.size(), static_cast<std::size_t>(c.rounds));
    for (std::size_t r = 0; r < log.rounds.size(); ++r) {
      EXPECT_EQ(log.rounds[r].index, static_cast<int>(r) + 1);
      for (const auto& [slot, d] : log.rounds[r].documents) EXPECT_TRUE(validate_document(d).ok()) << slot;
    }
    EXPECT_EQ(log_from_string(log_to_string(log)), log);
    for (const auto& rec : promotion_records(log)) {
      EXPECT_GE(rec.value(), -1.0);
      EXPECT_LE(rec.value(), 1.0);
    }
  }
}

}  // namespace
}  // namespace arena
