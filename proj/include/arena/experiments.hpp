// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/core.hpp"
#include "arena/dataset.hpp"
#include "arena/doc_agents.hpp"
#include "arena/parallel.hpp"
#include "arena/providers.hpp"
#include "arena/query_agents.hpp"
#include "arena/rankers.hpp"
#include "arena/synthetic.hpp"

namespace arena {

inline constexpr int kConfigVersion = 1;

enum class ExperimentKind { effectiveness, offline_promotion, online_simulation };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ProvidersConfig {
  /// "stub": deterministic local providers; "remote": HTTP endpoints.
  std::string mode = "stub";
  std::uint64_t stub_seed = 0;
  /// Remote tags per capability. URLs fall back to ARENA_EMBED_URL,
  /// ARENA_LLM_URL and ARENA_NLI_URL, the key to ARENA_API_KEY.
  std::vector<std::string> embedders;
  std::vector<std::string> generators;
  std::vector<std::string> relevance;
  std::vector<std::string> nli;
  std::string embed_url;
  std::string llm_url;
  std::string nli_url;
  int max_retries = 3;
  int max_in_flight = 8;
  int timeout_ms = 30000;
};

struct DatasetConfig {
  std::filesystem::path path;
  std::filesystem::path judgments;
  std::optional<SyntheticSpec> synthetic;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::online_simulation;
  std::string name = "arena";
  DatasetConfig dataset;
  std::vector<RankerSpec> rankers;
  std::vector<QueryAgentSpec> query_agents;
  std::vector<DocumentAgentSpec> document_agents;
  std::vector<CorpusKind> corpora{CorpusKind::human, CorpusKind::llm, CorpusKind::mixed};
  int rounds = 4;
  /// Effectiveness is averaged over rounds first_round..last.
  int first_round = 2;
  std::vector<std::uint64_t> seeds{1};
  int max_terms = kDefaultMaxTerms;
  /// Lexical rankers and agents use statistics of the whole dataset.
  bool background_stats = false;
  /// Offline promotion: search each agent kind's grid instead of using its
  /// configured parameters.
  bool grid_search = true;
  /// Offline promotion: the dataset round providing initial documents.
  int offline_round = 1;
  double alpha = 0.05;
  ProvidersConfig providers;
  std::filesystem::path output_dir = "out";

  /// Throws ArenaError(config_error).
  void validate() const;
};

/// Throws ArenaError(config_error) with the offending key.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every field, explicit defaults included.
nlohmann::json config_to_json(const ExperimentConfig& config);
/// FNV-1a of the canonical JSON, 16 hex digits.
std::string config_hash(const ExperimentConfig& config);
/// output_dir / (name + "-" + hash).
std::filesystem::path run_directory(const ExperimentConfig& config);

ProviderRegistry build_providers(const ProvidersConfig& config);

/// Synthetic or ingested; rejects are written next to the outputs when a
/// directory is given.
Dataset load_experiment_dataset(const ExperimentConfig& config, const ProviderRegistry& providers,
                                const std::filesystem::path& rejects_dir = {});

/// Queries of a topic: a human_file agent without a path uses the dataset's
/// own queries (first k).
std::vector<Query> queries_for(const Topic& topic, const QueryAgentSpec& spec, const Dataset& data,
                               const ProviderRegistry& providers, std::uint64_t seed);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// "# arena config_hash=<hash>" line, header, rows.
  std::string to_csv(const std::string& hash) const;
};

// ---------------------------------------------------------------------------
// Effectiveness

struct EvalRecord {
  std::string ranker;
  std::string query_agent;
  CorpusKind corpus = CorpusKind::human;
  std::string topic_id;
  int round = 0;
  std::string query_id;
  std::vector<std::string> ranked;  // doc ids, best first
  std::vector<int> grades;          // aligned with ranked
};

struct EffectivenessCell {
  std::string ranker;
  std::string query_agent;
  CorpusKind corpus = CorpusKind::human;
  /// Mean over (topic, round) units of the per-unit mean nDCG@1.
  double mean = 0.0;
  std::vector<std::pair<std::string, double>> units;  // unit key -> value, sorted by key
  std::vector<std::string> differs_by_corpus;
  std::vector<std::string> differs_by_query_agent;
  std::vector<std::string> differs_by_ranker;
};

struct Comparison {
  std::string family;  // corpus | query_agent | ranker
  std::string ranker;
  std::string query_agent;
  std::string corpus;
  std::string a;  // the compared values of the family's dimension
  std::string b;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t units = 0;
  double t = 0.0;
  double p = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

struct EffectivenessSummary {
  std::vector<EffectivenessCell> cells;
  std::vector<Comparison> comparisons;

  const EffectivenessCell* find(const std::string& ranker, const std::string& query_agent, CorpusKind corpus) const;
  CsvTable table() const;
  CsvTable comparisons_table() const;
};

/// Pairs units present in both cells; Bonferroni within each family instance.
EffectivenessSummary summarize_effectiveness(std::span<const EvalRecord> records, double alpha = 0.05);

std::string eval_records_to_jsonl(std::span<const EvalRecord> records, const std::string& hash);
std::vector<EvalRecord> eval_records_from_jsonl(const std::string& text);

// ---------------------------------------------------------------------------
// Offline promotion

struct GridRow {
  std::string agent;
  std::string ranker;
  std::string params;
  double mean = 0.0;
  std::size_t units = 0;
};

struct PromotionCell {
  std::string agent;
  std::string ranker;
  std::string params;
  double mean = 0.0;
  std::size_t units = 0;
};

struct OfflineSummary {
  std::vector<PromotionCell> cells;

  const PromotionCell* find(const std::string& agent, const std::string& ranker) const;
  /// Agents as rows, rankers as columns.
  CsvTable matrix() const;
  CsvTable long_table() const;
};

/// Mean scaled rank promotion of the evaluated slot of each log (label
/// "evaluated_slot"), averaged per (label "agent", label "ranker").
OfflineSummary summarize_offline(std::span<const CompetitionLog> logs);

/// Mean promotion of the evaluated slot over a log's round transitions.
double evaluated_promotion(const CompetitionLog& log);

// ---------------------------------------------------------------------------
// Online simulation

struct OnlineRow {
  std::string ranker;
  std::string query_agent;
  std::string agent;
  AgentKind kind = AgentKind::static_agent;
  std::vector<double> by_round;  // mean rank per round
  double overall = 0.0;          // mean rank over all competitions and rounds
  std::size_t competitions = 0;
};

struct OnlineSummary {
  std::vector<OnlineRow> rows;

  CsvTable by_round_table() const;
  CsvTable overall_table() const;
  /// Static agents only: query agent rows, ranker columns.
  CsvTable static_table() const;
};

/// Agent names come from labels "agent.<slot>".
OnlineSummary summarize_online(std::span<const CompetitionLog> logs);

// ---------------------------------------------------------------------------
// Harnesses

struct RunOptions {
  /// Progress lines (one per completed round or unit); null for silence.
  std::ostream* progress = nullptr;
  Execution exec = Execution::parallel;
  /// Write outputs under run_directory(config).
  bool write_outputs = true;
};

struct EffectivenessResult {
  std::vector<EvalRecord> records;
  EffectivenessSummary summary;
  std::filesystem::path directory;
};

struct OfflineResult {
  std::vector<GridRow> grid;
  std::vector<CompetitionLog> best_logs;
  OfflineSummary summary;
  std::filesystem::path directory;
};

struct OnlineResult {
  std::vector<CompetitionLog> logs;
  OnlineSummary summary;
  std::filesystem::path directory;
};

EffectivenessResult run_effectiveness(const ExperimentConfig& config, const RunOptions& options = {});
OfflineResult run_offline_promotion(const ExperimentConfig& config, const RunOptions& options = {});
OnlineResult run_online_simulation(const ExperimentConfig& config, const RunOptions& options = {});

/// Recomputes the summary CSVs of a run directory from its persisted logs or
/// records into <dir>/report. Returns the written files.
std::vector<std::filesystem::path> regenerate_report(const std::filesystem::path& run_dir);

}  // namespace arena
