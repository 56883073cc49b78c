// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/sim.hpp"

#include <numeric>
#include <utility>

namespace arena {

void SimulationConfig::validate() const {
  if (rounds < 1) fail(ErrorCode::config_error, "simulation needs at least one round");
  if (agents.size() < 2) fail(ErrorCode::config_error, "simulation needs at least two agents");
  if (queries.empty()) fail(ErrorCode::config_error, "simulation needs at least one query");
  if (max_terms < 1) fail(ErrorCode::config_error, "max_terms must be positive");
  for (const auto& q : queries) {
    if (q.topic_id != queries.front().topic_id) {
      fail(ErrorCode::config_error, "queries of one competition must share a topic");
    }
  }
  ranker.validate();
  for (const auto& a : agents) a.validate();
}

std::string slot_name(std::size_t index) { return "p" + std::to_string(index + 1); }

CompetitionState init_competition(const SimulationConfig& config, std::span<const Document> initial_docs) {
  config.validate();
  if (initial_docs.size() < config.agents.size()) {
    fail(ErrorCode::insufficient_documents, std::to_string(initial_docs.size()) + " documents for " +
                                                std::to_string(config.agents.size()) + " agents");
  }
  CompetitionState state;
  state.config = config;
  state.log.topic_id = config.queries.front().topic_id;
  state.log.queries = config.queries;
  state.log.seed = config.seed;

  Rng pairing(derive_seed(config.seed, "pairing"));
  std::vector<std::size_t> picks(config.agents.size());
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  if (config.random_pairing) picks = pairing.sample_indices(initial_docs.size(), config.agents.size());
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    auto agent = std::shared_ptr<const DocumentAgent>(make_document_agent(config.agents[i]));
    const std::string slot = slot_name(i);
    Document doc = initial_docs[picks[i]];
    doc.author = agent->id();
    doc.round_created = 1;
    state.log.participants.push_back({slot, agent->id()});
    state.streams.emplace_back(derive_seed(config.seed, "agent/" + slot + "/" + agent->id().key()));
    state.documents.push_back(std::move(doc));
    state.agents.push_back(std::move(agent));
  }
  return state;
}

namespace {

[[noreturn]] void rethrow_in_round(const ArenaError& e, int round, const std::string& where) {
  fail(e.code(), "round " + std::to_string(round) + where + ": " + e.message());
}

void advance(CompetitionState& state, const SimulationResources& resources) {
  const auto& cfg = state.config;
  const int r = state.round + 1;
  if (r > cfg.rounds) fail(ErrorCode::invalid_argument, "competition already ran all rounds");
  const std::size_t n = state.documents.size();

  try {
    TermStats local;
    const TermStats* stats = resources.background;
    if (stats == nullptr) {
      local = stats_of(state.documents);
      stats = &local;
    }
    const RankingResources rr{resources.providers, stats};
    std::vector<RankedList> rankings;
    for (const auto& q : cfg.queries) rankings.push_back(rank(q, state.documents, cfg.ranker, rr, r, resources.exec));

    const std::size_t acting_query = static_cast<std::size_t>(r - 1) % cfg.queries.size();
    const RankedList& revealed = rankings[acting_query];
    std::vector<AgentAction> actions(n);
    if (r < cfg.rounds) {
      for_each_index(n, resources.exec, [&](std::size_t i) {
        const AgentView view{state.documents[i], cfg.queries[acting_query], revealed, state.documents,
                             state.history,      *stats,                    resources.providers,
                             cfg.max_terms,      Execution::serial};
        try {
          actions[i] = state.agents[i]->act(view, state.streams[i]);
        } catch (const ArenaError& e) {
          rethrow_in_round(e, r, ", slot " + slot_name(i));
        }
        const auto check = validate_text(actions[i].text, cfg.max_terms);
        if (!check.ok()) {
          const bool too_long = check.violations.front() == "term_limit";
          fail(too_long ? ErrorCode::term_limit_exceeded : ErrorCode::malformed_response,
               "round " + std::to_string(r) + ", slot " + slot_name(i) + ": invalid document (" +
                   check.violations.front() + ")");
        }
      });
    } else {
      for (std::size_t i = 0; i < n; ++i) actions[i].text = state.documents[i].text;
    }

    std::map<std::string, Document> docs;
    std::map<std::string, std::optional<ModificationProposal>> proposals;
    for (std::size_t i = 0; i < n; ++i) {
      docs.emplace(slot_name(i), state.documents[i]);
      proposals.emplace(slot_name(i), actions[i].proposal);
    }
    RankedSnapshot snap{r, revealed, {}};
    for (const auto& d : state.documents) snap.texts.emplace(d.id, d.text);
    state.history.push_back(std::move(snap));
    state.log = snapshot_round(std::move(state.log), std::move(rankings), std::move(docs), std::move(proposals));
    for (std::size_t i = 0; i < n; ++i) {
      if (actions[i].text != state.documents[i].text) {
        state.documents[i].text = std::move(actions[i].text);
        state.documents[i].round_created = r + 1;
      }
    }
  } catch (const ArenaError& e) {
    if (e.message().rfind("round ", 0) == 0) throw;
    rethrow_in_round(e, r, "");
  }
  state.round = r;
  if (resources.on_round) resources.on_round(state.log);
}

}  // namespace

CompetitionState run_round(CompetitionState state, const SimulationResources& resources) {
  advance(state, resources);
  return state;
}

CompetitionLog run_competition(const SimulationConfig& config, std::span<const Document> initial_docs,
                               const SimulationResources& resources) {
  CompetitionState state = init_competition(config, initial_docs);
  try {
    while (state.round < config.rounds) advance(state, resources);
  } catch (const ArenaError& e) {
    CompetitionLog partial = state.log;
    partial.complete = false;
    partial.error = e.what();
    throw CompetitionFailed(e, std::move(partial));
  }
  state.log.complete = true;
  return std::move(state.log);
}

}  // namespace arena
