// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "arena/core.hpp"
#include "arena/doc_agents.hpp"
#include "arena/error.hpp"
#include "arena/parallel.hpp"
#include "arena/providers.hpp"
#include "arena/rankers.hpp"
#include "arena/rng.hpp"

namespace arena {

struct SimulationConfig {
  int rounds = 4;
  std::vector<DocumentAgentSpec> agents;
  RankerSpec ranker;
  /// Every query is ranked each round; agents act on query (round - 1) mod n.
  std::vector<Query> queries;
  std::uint64_t seed = 0;
  int max_terms = kDefaultMaxTerms;
  /// When false, slot i starts from initial_docs[i].
  bool random_pairing = true;

  /// Throws ArenaError(config_error).
  void validate() const;
};

struct SimulationResources {
  const ProviderRegistry* providers = nullptr;
  /// Collection statistics for lexical rankers and agents; when null, the
  /// statistics of the documents competing in the round.
  const TermStats* background = nullptr;
  Execution exec = Execution::parallel;
  /// Called after each completed round.
  std::function<void(const CompetitionLog&)> on_round;
};

/// Slot names: "p1", "p2", ... in agent order.
std::string slot_name(std::size_t index);

struct CompetitionState {
  SimulationConfig config;
  std::vector<std::shared_ptr<const DocumentAgent>> agents;  // by slot index
  std::vector<Document> documents;                           // current version, by slot index
  std::vector<Rng> streams;                                  // per-slot randomness
  std::vector<RankedSnapshot> history;                       // revealed rankings of the acting queries
  int round = 0;
  CompetitionLog log;
};

/// Seeded random assignment of distinct initial documents to agents. Each
/// document keeps its id as lineage key and is re-authored by its agent.
/// Throws ArenaError(insufficient_documents) if there are fewer documents
/// than agents.
CompetitionState init_competition(const SimulationConfig& config, std::span<const Document> initial_docs);

/// Ranks, reveals, lets every agent act on the same ranking, validates and
/// records. Agents do not act in the last round. Errors carry the round.
CompetitionState run_round(CompetitionState state, const SimulationResources& resources);

/// Raised when a competition aborts; carries the partial log, marked incomplete.
class CompetitionFailed : public ArenaError {
 public:
  CompetitionFailed(const ArenaError& cause, CompetitionLog partial)
      : ArenaError(cause.code(), cause.message()), log_(std::move(partial)) {}
  const CompetitionLog& log() const noexcept { return log_; }

 private:
  CompetitionLog log_;
};

CompetitionLog run_competition(const SimulationConfig& config, std::span<const Document> initial_docs,
                               const SimulationResources& resources);

}  // namespace arena
