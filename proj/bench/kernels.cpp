// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP path for the hot kernels. Both paths produce
// identical results (see the determinism tests); only wall time differs.

#include <benchmark/benchmark.h>

#include "arena/doc_agents.hpp"
#include "arena/rankers.hpp"
#include "arena/synthetic.hpp"

namespace {

using namespace arena;

struct Fixture {
  std::vector<Document> docs;
  Query query;
  RankedList ranking;
  TermStats stats;
  ProviderRegistry reg = ProviderRegistry::local_stubs(0);
};

// One topic with `n` documents pooled over rounds.
const Fixture& fixture(int n) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  SyntheticSpec spec;
  spec.topics = 1;
  spec.rounds = (n + 4) / 5;
  const auto data = make_synthetic_dataset(spec);
  Fixture f;
  f.docs = data.documents_of("t01");
  f.docs.resize(static_cast<std::size_t>(n));
  f.query = data.queries_of("t01").front();
  f.stats = stats_of(f.docs);
  f.ranking = rank(f.query, f.docs, {"bm25", RankerKind::bm25, 1.2, 0.75, ""}, {&f.reg, nullptr}, 1, Execution::serial);
  return cache.emplace(n, std::move(f)).first->second;
}

Execution mode(const benchmark::State& s) { return s.range(1) ? Execution::parallel : Execution::serial; }

void BM_RankBm25(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const RankerSpec spec{"bm25", RankerKind::bm25, 1.2, 0.75, ""};
  for (auto _ : state) benchmark::DoNotOptimize(rank(f.query, f.docs, spec, {&f.reg, nullptr}, 1, mode(state)));
}

void BM_RankSemantic(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const RankerSpec spec{"e5", RankerKind::semantic, 1.2, 0.75, "stub-e5"};
  for (auto _ : state) benchmark::DoNotOptimize(rank(f.query, f.docs, spec, {&f.reg, nullptr}, 1, mode(state)));
}

void BM_LexicalPairTable(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto& self = f.docs.back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lexical_pair_table(self, f.query, f.ranking, f.docs, LexicalAgentParams{0.5, 2, 0.0}, f.stats, mode(state)));
  }
}

void BM_SemanticPairTable(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto& self = f.docs.back();
  SemanticAgentParams p;
  p.strategy = CandidateStrategy::all;
  p.eta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(semantic_pair_table(self, f.query, f.ranking, f.docs, p, f.reg.embedder(p.embedder),
                                                 f.reg.entailment(p.nli), mode(state)));
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {5, 20, 50}) {
    for (int par : {0, 1}) b->Args({n, par});
  }
  b->ArgNames({"docs", "parallel"});
}

BENCHMARK(BM_RankBm25)->Apply(sizes);
BENCHMARK(BM_RankSemantic)->Apply(sizes);
BENCHMARK(BM_LexicalPairTable)->Apply(sizes);
BENCHMARK(BM_SemanticPairTable)->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
