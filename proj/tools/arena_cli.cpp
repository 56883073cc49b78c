// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "arena/dataset.hpp"
#include "arena/error.hpp"
#include "arena/experiments.hpp"
#include "arena/rankers.hpp"
#include "arena/synthetic.hpp"

namespace {

using json = nlohmann::json;
using namespace arena;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitProvider = 3;
constexpr int kExitData = 4;

struct Overrides {
  std::string config;
  std::vector<std::uint64_t> seeds;
  int rounds = 0;
  std::string output_dir;
  std::string name;
  int workers = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "Replace the configured seeds (repeatable)");
  cmd->add_option("--rounds", o.rounds, "Override the number of rounds")->check(CLI::PositiveNumber);
  cmd->add_option("--output-dir", o.output_dir, "Override the output directory");
  cmd->add_option("--name", o.name, "Override the experiment name");
  cmd->add_option("--workers", o.workers, "Worker threads (default: ARENA_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("-q,--quiet", o.quiet, "No progress lines on stderr");
}

ExperimentConfig resolve(const Overrides& o, std::optional<ExperimentKind> kind) {
  std::ifstream in(o.config, std::ios::binary);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorCode::config_error, o.config + " is not a JSON object");
  if (kind) j["experiment"] = to_string(*kind);
  if (!o.seeds.empty()) j["seeds"] = o.seeds;
  if (o.rounds > 0) j["rounds"] = o.rounds;
  if (!o.output_dir.empty()) j["output_dir"] = o.output_dir;
  if (!o.name.empty()) j["name"] = o.name;
  if (o.workers > 0) setenv("ARENA_WORKERS", std::to_string(o.workers).c_str(), 1);
  return config_from_json(j);
}

RunOptions run_options(const Overrides& o) {
  RunOptions r;
  r.progress = o.quiet ? nullptr : &std::cerr;
  return r;
}

int exit_code(const ArenaError& e) {
  switch (e.error_class()) {
    case ErrorClass::usage:
    case ErrorClass::config: return kExitConfig;
    case ErrorClass::provider: return kExitProvider;
    case ErrorClass::data: return kExitData;
  }
  return kExitData;
}

void print_files(const std::filesystem::path& dir, const std::vector<std::string>& names) {
  std::cout << dir.string() << '\n';
  for (const auto& n : names) std::cout << "  " << n << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arena: ranking competitions between query, document and ranker agents"};
  app.require_subcommand(1);

  Overrides sim_o, eff_o, promo_o, rank_o, gen_o;
  auto* simulate = app.add_subcommand("simulate", "Online simulation: multi-round competitions between document agents");
  add_common(simulate, sim_o);

  auto* effectiveness = app.add_subcommand("effectiveness", "nDCG@1 of rankers per query agent and corpus kind");
  add_common(effectiveness, eff_o);

  bool no_grid = false;
  auto* promote = app.add_subcommand("promote", "Offline scaled rank promotion of document agents per ranker");
  add_common(promote, promo_o);
  promote->add_flag("--no-grid", no_grid, "Use the configured agent parameters instead of a grid search");

  std::string topic, query_text, ranker_name;
  int round = -1;
  auto* rank_cmd = app.add_subcommand("rank", "Rank a topic's documents for a query");
  rank_cmd->add_option("-c,--config", rank_o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  rank_cmd->add_option("--topic", topic, "Topic id")->required();
  rank_cmd->add_option("--query", query_text, "Query text")->required();
  rank_cmd->add_option("--ranker", ranker_name, "Ranker name (default: every configured ranker)");
  rank_cmd->add_option("--round", round, "Dataset round (default: the topic's last round)");

  std::string gen_agent, gen_out;
  auto* gen = app.add_subcommand("gen-queries", "Generate query variations for every topic");
  gen->add_option("-c,--config", gen_o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--agent", gen_agent, "Query agent name (default: all)");
  gen->add_option("-o,--out", gen_out, "Output JSONL (default: stdout)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Recompute summary tables from a run directory's logs");
  report->add_option("--dir", report_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  SyntheticSpec synth_spec;
  std::string synth_out, synth_variations;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset in arena-jsonl/1");
  synth->add_option("-o,--out", synth_out, "Output dataset file")->required();
  synth->add_option("--variations", synth_variations, "Also write human query variations here");
  synth->add_option("--topics", synth_spec.topics, "Topics")->capture_default_str();
  synth->add_option("--rounds", synth_spec.rounds, "Rounds")->capture_default_str();
  synth->add_option("--queries", synth_spec.queries_per_topic, "Human queries per topic")->capture_default_str();
  synth->add_option("--gap", synth_spec.mixed_gap_points, "Planted mixed-corpus nDCG@1 gap (x100)")->capture_default_str();
  synth->add_option("--seed", synth_spec.seed, "Seed")->capture_default_str();
  synth->add_option("--human-key-scale", synth_spec.human_key_scale, "Scale of human key-term rates")
      ->capture_default_str();
  synth->add_option("--llm-key-rate", synth_spec.llm_key_rate, "Key-term rate of LLM documents")->capture_default_str();
  synth->add_option("--llm-related-rate", synth_spec.llm_related_rate, "Related-term rate of LLM documents")
      ->capture_default_str();
  synth->add_option("--related-embedder", synth_spec.related_embedder,
                    "Pick related terms as nearest neighbours under this stub embedder");

  std::string ingest_path, ingest_judgments, ingest_rejects, ingest_out;
  int ingest_max_terms = kDefaultMaxTerms;
  auto* ingest = app.add_subcommand("ingest", "Validate a dataset; invalid records go to a rejects file");
  ingest->add_option("--data", ingest_path, "Dataset file (arena-jsonl/1)")->required()->check(CLI::ExistingFile);
  ingest->add_option("--judgments", ingest_judgments, "Judgments file")->check(CLI::ExistingFile);
  ingest->add_option("--rejects", ingest_rejects, "Rejects output (default: <data>.rejects.jsonl)");
  ingest->add_option("-o,--out", ingest_out, "Write the accepted records here");
  ingest->add_option("--max-terms", ingest_max_terms, "Document length limit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) {
      const auto r = run_online_simulation(resolve(sim_o, ExperimentKind::online_simulation), run_options(sim_o));
      print_files(r.directory, {"avg_rank_by_round.csv", "avg_rank.csv", "static_avg_rank.csv",
                                std::to_string(r.logs.size()) + " logs under logs/"});
    } else if (*effectiveness) {
      const auto r = run_effectiveness(resolve(eff_o, ExperimentKind::effectiveness), run_options(eff_o));
      print_files(r.directory, {"effectiveness.csv", "comparisons.csv", "evaluations.jsonl"});
    } else if (*promote) {
      auto cfg = resolve(promo_o, ExperimentKind::offline_promotion);
      if (no_grid) cfg.grid_search = false;
      const auto r = run_offline_promotion(cfg, run_options(promo_o));
      print_files(r.directory, {"promotion_matrix.csv", "promotion.csv", "grid.csv",
                                std::to_string(r.best_logs.size()) + " logs under logs/"});
    } else if (*rank_cmd) {
      const auto cfg = resolve(rank_o, std::nullopt);
      const auto providers = build_providers(cfg.providers);
      const auto data = load_experiment_dataset(cfg, providers);
      if (data.find_topic(topic) == nullptr) fail(ErrorCode::missing_topic, "no topic " + topic);
      const int r = round >= 0 ? round : data.last_round(topic);
      const auto docs = data.documents_of(topic, r);
      if (docs.empty()) fail(ErrorCode::empty_input, "topic " + topic + " has no documents in round " + std::to_string(r));
      TermStats background;
      if (cfg.background_stats) background = stats_of(data.documents);
      const Query q{topic + "/cli", topic, query_text, {AgentKind::human, "", ""}};
      std::cout << "# arena config_hash=" << config_hash(cfg) << "\nranker,rank,doc_id,score\n";
      bool any = false;
      for (const auto& spec : cfg.rankers) {
        if (!ranker_name.empty() && spec.name != ranker_name) continue;
        any = true;
        const auto list =
            rank(q, docs, spec, RankingResources{&providers, cfg.background_stats ? &background : nullptr}, r);
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
          std::cout << spec.name << ',' << i + 1 << ',' << list.entries[i].doc_id << ',' << list.entries[i].score << '\n';
        }
      }
      if (!any) fail(ErrorCode::config_error, "no ranker named " + ranker_name);
    } else if (*gen) {
      const auto cfg = resolve(gen_o, std::nullopt);
      const auto providers = build_providers(cfg.providers);
      const auto data = load_experiment_dataset(cfg, providers);
      std::ofstream file;
      if (!gen_out.empty()) {
        file.open(gen_out, std::ios::binary);
        if (!file) fail(ErrorCode::malformed_file, "cannot write " + gen_out);
      }
      std::ostream& out = gen_out.empty() ? std::cout : file;
      bool any = false;
      for (const auto& qa : cfg.query_agents) {
        if (!gen_agent.empty() && qa.name != gen_agent) continue;
        any = true;
        for (const auto& t : data.topics) {
          for (const auto& q : queries_for(t, qa, data, providers, cfg.seeds.front())) {
            out << json{{"agent", qa.name}, {"topic_id", t.id}, {"query_id", q.id}, {"text", q.text}}.dump() << '\n';
          }
        }
      }
      if (!any) fail(ErrorCode::config_error, gen_agent.empty() ? "config has no query agents" : "no query agent named " + gen_agent);
    } else if (*report) {
      for (const auto& p : regenerate_report(report_dir)) std::cout << p.string() << '\n';
    } else if (*synth) {
      const auto stubs = ProviderRegistry::local_stubs(ProvidersConfig{}.stub_seed);
      const auto data = make_synthetic_dataset(
          synth_spec, synth_spec.related_embedder.empty() ? nullptr : &stubs.embedder(synth_spec.related_embedder));
      export_dataset(synth_out, data);
      if (!synth_variations.empty()) {
        std::ofstream v(synth_variations, std::ios::binary);
        if (!v) fail(ErrorCode::malformed_file, "cannot write " + synth_variations);
        v << human_variations_jsonl(data);
      }
      std::cout << data.topics.size() << " topics, " << data.queries.size() << " queries, " << data.documents.size()
                << " documents\n";
    } else if (*ingest) {
      auto result = ingest_dataset(ingest_path, kDatasetFormat, ingest_max_terms);
      if (!ingest_judgments.empty()) apply_judgments(result.data, load_judgments(ingest_judgments));
      const std::string rejects = ingest_rejects.empty() ? ingest_path + ".rejects.jsonl" : ingest_rejects;
      write_rejects(rejects, result.rejects);
      if (!ingest_out.empty()) export_dataset(ingest_out, result.data);
      std::cout << result.data.topics.size() << " topics, " << result.data.queries.size() << " queries, "
                << result.data.documents.size() << " documents, " << result.rejects.size() << " rejected ("
                << rejects << ")\n";
    }
  } catch (const ArenaError& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
