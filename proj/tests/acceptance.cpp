// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "arena/experiments.hpp"
#include "arena/log_io.hpp"
#include "arena/metrics.hpp"
#include "arena/sim.hpp"
#include "support.hpp"
#include "ttest_oracle_cases.hpp"

namespace fs = std::filesystem;
using namespace arena;
using namespace arena::testing;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const double kLambdas[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
const double kEtas[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};

// ---------------------------------------------------------------------------

Outcome agents_match_brute_force() {
  const auto t0 = Clock::now();
  const auto providers = ProviderRegistry::local_stubs(0);
  const Embedder& emb = providers.embedder("stub-e5");
  const EntailmentModel& nli = providers.entailment("stub-nli");
  Rng rng(20260101);
  int agree = 0, total = 0, acted = 0;
  std::string first_miss;
  for (int i = 0; i < 200; ++i) {
    const Instance in = random_instance(rng, 5, 6);
    const Document& self = in.docs[rng.below(in.docs.size())];
    std::vector<std::vector<std::string>> toks;
    for (const auto& d : in.docs) toks.push_back(tokenize(d.text));
    const TermStats stats = compute_term_stats(toks);
    // Tight limits now and then, so the next-best fallback is exercised.
    const int own_terms = static_cast<int>(count_terms(self.text));
    const int max_terms = rng.below(3) == 0 ? own_terms + static_cast<int>(rng.below(3)) : kDefaultMaxTerms;

    LexicalAgentParams lp;
    lp.lambda = kLambdas[rng.below(11)];
    lp.m = 2 + static_cast<int>(rng.below(std::min<std::uint64_t>(3, in.docs.size() - 1)));
    lp.eta = kEtas[rng.below(6)];
    const auto lex = lexical_propose(self, in.query, in.ranking, in.docs, lp, stats, max_terms, Execution::parallel);
    const auto lex_serial = lexical_propose(self, in.query, in.ranking, in.docs, lp, stats, max_terms, Execution::serial);
    const bool lex_ok = same_pick(lexical_oracle(in, self, lp, max_terms), lex) && lex == lex_serial;

    SemanticAgentParams sp;
    sp.strategy = static_cast<CandidateStrategy>(rng.below(3));
    sp.lambda = kLambdas[rng.below(11)];
    sp.eta = kEtas[rng.below(6)];
    const auto sem = semantic_propose(self, in.query, in.ranking, in.docs, sp, emb, nli, max_terms);
    const bool sem_ok = same_pick(semantic_oracle(in, self, sp, emb, nli, max_terms), sem);

    total += 2;
    agree += lex_ok + sem_ok;
    acted += lex.has_value() + sem.has_value();
    if ((!lex_ok || !sem_ok) && first_miss.empty()) {
      first_miss = " first mismatch: instance " + std::to_string(i) + (lex_ok ? " semantic" : " lexical");
    }
  }
  const double dt = seconds_since(t0);
  Outcome o;
  o.pass = agree == total && dt < 60.0;
  o.detail = std::to_string(agree) + "/" + std::to_string(total) + " proposals agree (" + std::to_string(acted) +
             " non-empty), " + fmt("%.2f s", dt) + " (limit 60 s)" + first_miss;
  return o;
}

// ---------------------------------------------------------------------------

Outcome scoring_matches_oracles() {
  Rng rng(777);
  const auto& vocab = small_vocab();
  double worst = 0.0;
  int cases = 0;
  auto tokens = [&](int max_len) {
    std::vector<std::string> t;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len)));
    for (int i = 0; i < n; ++i) t.push_back(vocab[rng.below(8)]);
    return t;
  };
  // Hand-computed anchor: ln(3/1.5) * 2.2 / 2.2 = ln 2.
  {
    std::vector<std::vector<std::string>> coll{{"a"}, {"b"}};
    const auto stats = compute_term_stats(coll);
    const std::vector<std::string> q{"a"};
    worst = std::max(worst, std::abs(bm25_score(q, coll[0], stats) - std::log(2.0)));
    const std::vector<std::string> aa{"a", "a"};
    worst = std::max(worst, std::abs(tfidf_sum_score(q, aa, stats) - 2.0 * std::log(3.0 / 1.5)));
    ++cases;
  }
  for (; cases < 50; ++cases) {
    std::vector<std::vector<std::string>> coll;
    const int n = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n; ++i) coll.push_back(tokens(12));
    auto q = tokens(4);
    if (rng.below(2)) q.push_back(q.front());  // repeated query term
    const auto stats = compute_term_stats(coll);
    const double k1 = 0.5 + 1.5 * rng.unit();
    const double b = rng.unit();
    for (const auto& d : coll) {
      worst = std::max(worst, std::abs(bm25_score(q, d, stats, k1, b) - bm25_oracle(q, d, coll, k1, b)));
      worst = std::max(worst, std::abs(tfidf_sum_score(q, d, stats) - tfidf_sum_oracle(q, d, coll)));
    }
  }

  double worst_t = 0.0;
  const auto& tc = ttest_oracle_cases();
  for (const auto& c : tc) {
    const auto r = paired_t_test(c.a, c.b);
    worst_t = std::max({worst_t, std::abs(r.t - c.t), std::abs(r.p - c.p)});
  }
  Outcome o;
  o.pass = worst <= 1e-9 && worst_t <= 1e-6 && tc.size() >= 20;
  o.detail = std::to_string(cases) + " scoring cases max |err| " + fmt("%.3g", worst) + " (tol 1e-9); " +
             std::to_string(tc.size()) + " t-test cases max |err| " + fmt("%.3g", worst_t) + " (tol 1e-6)";
  return o;
}

// ---------------------------------------------------------------------------

Outcome promotion_bounds() {
  int checked = 0, bad = 0;
  for (int n = 2; n <= 10; ++n) {
    for (int prev = 1; prev <= n; ++prev) {
      for (int next = 1; next <= n; ++next) {
        ++checked;
        const double v = scaled_rank_promotion(prev, next, n);
        const int d = prev - next;
        double expect = 0.0;
        if (d > 0) expect = static_cast<double>(d) / (prev - 1);
        if (d < 0) expect = static_cast<double>(d) / (n - prev);
        bool ok = v >= -1.0 && v <= 1.0 && v == expect;
        if (d == 0) ok = ok && v == 0.0;
        if (next == 1 && prev > 1) ok = ok && v == 1.0;
        if (next == n && prev < n) ok = ok && v == -1.0;
        bad += !ok;
      }
    }
  }
  // Out-of-range ranks are rejected rather than clamped.
  int rejected = 0;
  const int invalid[][3] = {{0, 1, 5}, {1, 6, 5}, {6, 1, 5}, {1, 1, 1}, {1, 0, 3}};
  for (const auto& c : invalid) {
    try {
      scaled_rank_promotion(c[0], c[1], c[2]);
    } catch (const ArenaError& e) {
      rejected += e.code() == ErrorCode::invalid_rank;
    }
  }
  Outcome o;
  o.pass = bad == 0 && rejected == 5;
  o.detail = std::to_string(checked - bad) + "/" + std::to_string(checked) + " (prev,new,n) triples exact, " +
             std::to_string(rejected) + "/5 invalid triples rejected";
  return o;
}

// ---------------------------------------------------------------------------

Outcome ranking_invariants() {
  const auto providers = ProviderRegistry::local_stubs(0);
  const RankingResources res{&providers, nullptr};
  const RankerSpec rankers[] = {{"bm25", RankerKind::bm25, 1.2, 0.75, ""},
                                {"tfidf", RankerKind::tfidf_sum, 1.2, 0.75, ""},
                                {"e5", RankerKind::semantic, 1.2, 0.75, "stub-e5"},
                                {"llama", RankerKind::llm, 1.2, 0.75, "stub-llama"}};
  Rng rng(4242);
  int calls = 0, bad = 0, ties = 0;
  for (int i = 0; i < 1000; ++i) {
    const RankerSpec& r = rankers[i % 4];
    std::vector<Document> docs;
    const int n = 1 + static_cast<int>(rng.below(8));
    for (int k = 0; k < n; ++k) {
      // Repeated texts force score ties that only the id order can break.
      const std::string text = k > 0 && rng.below(3) == 0 ? docs[rng.below(docs.size())].text : random_text(rng, 3);
      docs.push_back(make_doc("doc" + std::to_string(rng.below(1000)) + "-" + std::to_string(k), text));
    }
    const Query q = make_query(random_sentence(rng, 1, 3));
    const RankedList a = rank(q, docs, r, res, 1);
    auto shuffled = docs;
    rng.shuffle(shuffled);
    const RankedList b = rank(q, shuffled, r, res, 1, Execution::serial);
    calls += 2;
    std::vector<std::string> ids;
    for (const auto& d : docs) ids.push_back(d.id);
    bool ok = satisfies_ranking_invariants(a, ids) && satisfies_ranking_invariants(b, ids) && a == b;
    for (std::size_t k = 1; k < a.size(); ++k) {
      ok = ok && a.entries[k - 1].score >= a.entries[k].score;
      ties += a.entries[k - 1].score == a.entries[k].score;
    }
    bad += !ok;
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(calls) + " rank() calls over 4 scorer kinds, " + std::to_string(bad) +
             " violations, " + std::to_string(ties) + " tied neighbours resolved by id";
  return o;
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), root).generic_string()] = s.str();
  }
  return out;
}

json online_config(const fs::path& out) {
  return {{"experiment", "online_simulation"},
          {"name", "determinism"},
          {"dataset", {{"synthetic", {{"topics", 1}, {"rounds", 2}, {"seed", 11}}}}},
          {"rankers", {{{"name", "bm25"}, {"kind", "bm25"}}}},
          {"query_agents", {{{"name", "human"}, {"kind", "human_file"}, {"k", 3}}}},
          {"document_agents",
           {{{"name", "lexical"}, {"kind", "lexical"}},
            {{"name", "semantic"}, {"kind", "semantic"}, {"eta", 0.2}},
            {{"name", "llm-pair"}, {"kind", "llm"}, {"strategy", "pair"}, {"generator", "stub-llama"}},
            {{"name", "llm-all"}, {"kind", "llm"}, {"strategy", "all"}, {"generator", "stub-gemma"}},
            {{"name", "static"}, {"kind", "static"}}}},
          {"rounds", 4},
          {"seeds", {5}},
          {"output_dir", out.string()}};
}

Outcome simulation_determinism() {
  const fs::path base = fs::temp_directory_path() / "arena-acceptance-determinism";
  fs::remove_all(base);
  std::map<std::string, std::string> trees[2];
  double worst = 0.0;
  std::size_t logs = 0, rounds = 0;
  const auto config = config_from_json(online_config(base));
  for (int i = 0; i < 2; ++i) {
    fs::remove_all(base);
    RunOptions opt;
    opt.exec = i == 0 ? Execution::parallel : Execution::serial;
    const auto t0 = Clock::now();
    const auto res = run_online_simulation(config, opt);
    worst = std::max(worst, seconds_since(t0));
    logs = res.logs.size();
    rounds = res.logs.empty() ? 0 : res.logs.front().rounds.size();
    trees[i] = read_tree(res.directory);
  }
  fs::remove_all(base);
  std::size_t csvs = 0;
  for (const auto& [name, body] : trees[0]) csvs += name.ends_with(".csv");
  Outcome o;
  o.pass = trees[0] == trees[1] && logs == 3 && rounds == 4 && csvs >= 3 && worst < 10.0;
  o.detail = std::to_string(trees[0].size()) + " files (" + std::to_string(csvs) + " CSVs, " + std::to_string(logs) +
             " logs of " + std::to_string(rounds) + " rounds) " + (trees[0] == trees[1] ? "byte-identical" : "DIFFER") +
             " across runs and thread modes; slowest run " + fmt("%.2f s", worst) + " (limit 10 s)";
  return o;
}

// ---------------------------------------------------------------------------

Outcome static_fixpoint() {
  const auto providers = ProviderRegistry::local_stubs(0);
  SyntheticSpec spec;
  spec.topics = 2;
  spec.rounds = 1;
  const Dataset data = make_synthetic_dataset(spec);
  const RankerSpec rankers[] = {{"bm25", RankerKind::bm25, 1.2, 0.75, ""},
                                {"tfidf", RankerKind::tfidf_sum, 1.2, 0.75, ""},
                                {"e5", RankerKind::semantic, 1.2, 0.75, "stub-e5"},
                                {"llama", RankerKind::llm, 1.2, 0.75, "stub-llama"}};
  int competitions = 0, bad = 0;
  std::size_t records = 0;
  for (const auto& topic : data.topics) {
    const auto docs = data.documents_of(topic.id);
    for (const auto& r : rankers) {
      SimulationConfig sc;
      sc.rounds = 5;
      sc.ranker = r;
      sc.queries = data.queries_of(topic.id);
      sc.seed = 3;
      for (std::size_t a = 0; a < docs.size(); ++a) sc.agents.push_back({"static", AgentKind::static_agent, {}});
      const auto log = run_competition(sc, docs, SimulationResources{&providers, nullptr, Execution::parallel, {}});
      ++competitions;
      bool ok = log.complete && log.rounds.size() == 5;
      for (const auto& round : log.rounds) {
        ok = ok && round.documents == log.rounds.front().documents;
        for (std::size_t q = 0; q < round.rankings.size(); ++q) {
          ok = ok && round.rankings[q].entries == log.rounds.front().rankings[q].entries;
        }
      }
      for (const auto& rec : promotion_records(log)) {
        ++records;
        ok = ok && rec.value() == 0.0;
      }
      bad += !ok;
    }
  }
  Outcome o;
  o.pass = bad == 0 && records > 0;
  o.detail = std::to_string(competitions) + " all-static competitions over 4 rankers, " + std::to_string(bad) +
             " changed; " + std::to_string(records) + " promotion records all 0";
  return o;
}

// ---------------------------------------------------------------------------

json alignment_config(std::uint64_t seed) {
  return {{"experiment", "offline_promotion"},
          {"name", "alignment"},
          {"dataset",
           {{"synthetic",
             {{"topics", 10},
              {"rounds", 2},
              {"seed", seed},
              {"human_key_scale", 0.5},
              {"llm_key_rate", 0.0},
              {"llm_related_rate", 0.7},
              {"related_embedder", "stub-e5"}}}}},
          {"rankers", {{{"name", "bm25"}, {"kind", "bm25"}}, {{"name", "e5"}, {"kind", "semantic"}, {"provider", "stub-e5"}}}},
          {"document_agents",
           {{{"name", "lexical"}, {"kind", "lexical"}, {"lambda", 0.7}, {"m", 2}, {"eta", 0.0}},
            {{"name", "semantic"}, {"kind", "semantic"}, {"strategy", "all"}, {"lambda", 0.0}, {"eta", 0.0}}}},
          {"rounds", 2},
          {"seeds", {seed}},
          {"grid_search", false}};
}

Outcome alignment_direction() {
  const auto t0 = Clock::now();
  int both = 0, lex_wins = 0, sem_wins = 0;
  double sums[4] = {0, 0, 0, 0};
  const int runs = 30;
  for (int seed = 1; seed <= runs; ++seed) {
    RunOptions opt;
    opt.write_outputs = false;
    const auto res = run_offline_promotion(config_from_json(alignment_config(static_cast<std::uint64_t>(seed))), opt);
    const double lb = res.summary.find("lexical", "bm25")->mean;
    const double le = res.summary.find("lexical", "e5")->mean;
    const double sb = res.summary.find("semantic", "bm25")->mean;
    const double se = res.summary.find("semantic", "e5")->mean;
    sums[0] += lb, sums[1] += le, sums[2] += sb, sums[3] += se;
    lex_wins += lb > le;
    sem_wins += se > sb;
    both += lb > le && se > sb;
  }
  Outcome o;
  o.pass = both >= 21;  // 70% of 30
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%d/%d seeded runs show both directions (need 21); lexical agent bm25 %.3f vs e5 %.3f, "
                "semantic agent bm25 %.3f vs e5 %.3f; %.1f s",
                both, runs, sums[0] / runs, sums[1] / runs, sums[2] / runs, sums[3] / runs, seconds_since(t0));
  o.detail = buf;
  return o;
}

// ---------------------------------------------------------------------------

json effectiveness_config(double gap) {
  return {{"experiment", "effectiveness"},
          {"name", "corpus-kinds"},
          {"dataset", {{"synthetic", {{"topics", 10}, {"rounds", 10}, {"mixed_gap_points", gap}, {"seed", 1}}}}},
          {"rankers",
           {{{"name", "bm25"}, {"kind", "bm25"}},
            {{"name", "e5"}, {"kind", "semantic"}, {"provider", "stub-e5"}},
            {{"name", "llama"}, {"kind", "llm"}, {"provider", "stub-llama"}}}},
          {"query_agents",
           {{{"name", "human"}, {"kind", "human_file"}, {"k", 3}},
            {{"name", "lexical"}, {"kind", "lexical"}, {"k", 3}},
            {{"name", "llm"}, {"kind", "llm"}, {"k", 3}, {"generator", "stub-llama"}}}},
          {"corpora", {"human", "llm", "mixed"}},
          {"first_round", 2}};
}

const Comparison* corpus_pair(const EffectivenessSummary& s, const std::string& ranker, const std::string& qa) {
  for (const auto& c : s.comparisons) {
    if (c.family == "corpus" && c.ranker == ranker && c.query_agent == qa && c.a == "human" && c.b == "mixed") return &c;
  }
  return nullptr;
}

Outcome corpus_kind_harness() {
  RunOptions opt;
  opt.write_outputs = false;
  const auto planted = run_effectiveness(config_from_json(effectiveness_config(5.0)), opt);
  const auto control = run_effectiveness(config_from_json(effectiveness_config(0.0)), opt);

  std::size_t cells = 0;
  for (const char* r : {"bm25", "e5", "llama"}) {
    for (const char* q : {"human", "lexical", "llm"}) {
      for (auto k : {CorpusKind::human, CorpusKind::llm, CorpusKind::mixed}) cells += planted.summary.find(r, q, k) != nullptr;
    }
  }
  const bool marks = !planted.summary.comparisons.empty() &&
                     std::all_of(planted.summary.comparisons.begin(), planted.summary.comparisons.end(),
                                 [](const Comparison& c) { return c.p_adjusted >= c.p && c.p_adjusted <= 1.0; });
  const Comparison* hit = corpus_pair(planted.summary, "bm25", "human");
  const Comparison* ctl = corpus_pair(control.summary, "bm25", "human");
  Outcome o;
  o.pass = cells == 27 && marks && hit && ctl && hit->significant && hit->p_adjusted < 0.05 && hit->mean_a > hit->mean_b &&
           !ctl->significant;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%zu/27 cells, %zu corrected comparisons; bm25/human queries: human %.1f vs mixed %.1f, "
                "p_bonf %.2g (%s); no-gap control %.1f vs %.1f, p_bonf %.2g (%s)",
                cells, planted.summary.comparisons.size(), hit ? 100 * hit->mean_a : NAN, hit ? 100 * hit->mean_b : NAN,
                hit ? hit->p_adjusted : NAN, hit && hit->significant ? "flagged" : "not flagged",
                ctl ? 100 * ctl->mean_a : NAN, ctl ? 100 * ctl->mean_b : NAN, ctl ? ctl->p_adjusted : NAN,
                ctl && ctl->significant ? "flagged" : "not flagged");
  o.detail = buf;
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"agent proposals equal brute-force argmax", agents_match_brute_force},
      {"scoring and t-test match oracles", scoring_matches_oracles},
      {"scaled rank promotion bounds", promotion_bounds},
      {"ranking invariants", ranking_invariants},
      {"simulation determinism", simulation_determinism},
      {"static fixpoint", static_fixpoint},
      {"agent/ranker alignment direction", alignment_direction},
      {"corpus-kind effectiveness harness", corpus_kind_harness},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d %s: %s | %s\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
