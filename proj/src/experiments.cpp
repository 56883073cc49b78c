// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "arena/error.hpp"
#include "arena/log_io.hpp"
#include "arena/metrics.hpp"
#include "arena/rng.hpp"
#include "arena/sim.hpp"

namespace arena {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string padded(std::size_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::malformed_file, "cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::malformed_file, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Progress {
 public:
  explicit Progress(std::ostream* out) : out_(out) {}
  void line(const std::string& text) {
    if (out_ == nullptr) return;
    std::lock_guard lock(mu_);
    *out_ << "[arena] " << text << '\n' << std::flush;
  }
  bool enabled() const { return out_ != nullptr; }
  // Counts finished jobs; prints roughly every tenth of the total.
  void step(const std::string& what, std::size_t total) {
    if (out_ == nullptr || total == 0) return;
    std::lock_guard lock(mu_);
    ++done_;
    const std::size_t every = std::max<std::size_t>(1, total / 10);
    if (done_ % every == 0 || done_ == total) {
      *out_ << "[arena] " << what << ' ' << done_ << '/' << total << '\n' << std::flush;
    }
  }

 private:
  std::ostream* out_;
  std::mutex mu_;
  std::size_t done_ = 0;
};

struct Run {
  const ExperimentConfig& config;
  std::string hash;
  ProviderRegistry providers;
  Dataset data;
  TermStats background;
  bool has_background = false;
  fs::path dir;

  const TermStats* stats() const { return has_background ? &background : nullptr; }
};

Run prepare(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  Run run{config, config_hash(config), build_providers(config.providers), {}, {}, false, {}};
  if (options.write_outputs) {
    run.dir = run_directory(config);
    fs::create_directories(run.dir);
  }
  run.data = load_experiment_dataset(config, run.providers, run.dir);
  if (config.background_stats) {
    run.background = stats_of(run.data.documents);
    run.has_background = true;
  }
  return run;
}

void write_manifest(const Run& run, const std::vector<std::string>& files) {
  json m = {{"schema", "arena-run/1"},
            {"experiment", to_string(run.config.experiment)},
            {"config_hash", run.hash},
            {"files", files}};
  write_file(run.dir / "manifest.json", m.dump(2) + "\n");
  write_file(run.dir / "config.json", config_to_json(run.config).dump(2) + "\n");
}

bool in_corpus(const Document& d, CorpusKind kind) {
  switch (kind) {
    case CorpusKind::human: return d.author.kind == AgentKind::human;
    case CorpusKind::llm: return d.author.kind == AgentKind::llm;
    case CorpusKind::mixed: return d.author.kind == AgentKind::human || d.author.kind == AgentKind::llm;
  }
  return false;
}

// queries[qa][topic]
std::vector<std::vector<std::vector<Query>>> all_queries(const Run& run) {
  std::vector<std::vector<std::vector<Query>>> out;
  for (const auto& qa : run.config.query_agents) {
    std::vector<std::vector<Query>> per_topic;
    for (const auto& t : run.data.topics) {
      per_topic.push_back(queries_for(t, qa, run.data, run.providers, run.config.seeds.front()));
    }
    out.push_back(std::move(per_topic));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

EffectivenessResult run_effectiveness(const ExperimentConfig& config, const RunOptions& options) {
  Run run = prepare(config, options);
  Progress progress(options.progress);
  const auto queries = all_queries(run);

  const std::size_t nr = config.rankers.size(), nq = config.query_agents.size(), nc = config.corpora.size(),
                    nt = run.data.topics.size();
  std::vector<std::vector<EvalRecord>> jobs(nr * nq * nc * nt);
  for_each_index(jobs.size(), options.exec, [&](std::size_t job) {
    const std::size_t ti = job % nt, ci = (job / nt) % nc, qi = (job / nt / nc) % nq, ri = job / nt / nc / nq;
    const Topic& topic = run.data.topics[ti];
    const RankerSpec& ranker = config.rankers[ri];
    const CorpusKind corpus = config.corpora[ci];
    const RankingResources rr{&run.providers, run.stats()};
    for (int round = config.first_round; round <= run.data.last_round(topic.id); ++round) {
      std::vector<Document> docs;
      for (auto& d : run.data.documents_of(topic.id, round)) {
        if (in_corpus(d, corpus)) docs.push_back(std::move(d));
      }
      if (docs.empty()) continue;
      if (corpus == CorpusKind::mixed) {
        const bool has_h = std::any_of(docs.begin(), docs.end(), [](auto& d) { return d.author.kind == AgentKind::human; });
        const bool has_l = std::any_of(docs.begin(), docs.end(), [](auto& d) { return d.author.kind == AgentKind::llm; });
        if (!has_h || !has_l) continue;
      }
      build_corpus(docs, corpus);
      for (const auto& q : queries[qi][ti]) {
        const auto* grades = topic.grades_for(q.id);
        if (grades == nullptr) fail(ErrorCode::missing_judgment, "no judgments for query " + q.id);
        const RankedList list = rank(q, docs, ranker, rr, round, Execution::serial);
        EvalRecord rec{ranker.name, config.query_agents[qi].name, corpus, topic.id, round, q.id, {}, {}};
        for (const auto& e : list.entries) {
          auto it = grades->find(e.doc_id);
          if (it == grades->end()) fail(ErrorCode::missing_judgment, "no grade for " + e.doc_id + " under " + q.id);
          rec.ranked.push_back(e.doc_id);
          rec.grades.push_back(it->second);
        }
        jobs[job].push_back(std::move(rec));
      }
    }
    progress.step("effectiveness", jobs.size());
  });

  EffectivenessResult result;
  for (auto& j : jobs) {
    for (auto& r : j) result.records.push_back(std::move(r));
  }
  result.summary = summarize_effectiveness(result.records, config.alpha);
  if (options.write_outputs) {
    result.directory = run.dir;
    write_file(run.dir / "evaluations.jsonl", eval_records_to_jsonl(result.records, run.hash));
    write_file(run.dir / "effectiveness.csv", result.summary.table().to_csv(run.hash));
    write_file(run.dir / "comparisons.csv", result.summary.comparisons_table().to_csv(run.hash));
    write_manifest(run, {"evaluations.jsonl", "effectiveness.csv", "comparisons.csv"});
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<DocumentAgentSpec> candidate_configs(const DocumentAgentSpec& spec, bool grid) {
  if (!grid) return {spec};
  std::vector<DocumentAgentSpec> out;
  auto push = [&](DocumentAgentParams p) { out.push_back({spec.name, spec.kind, std::move(p)}); };
  switch (spec.kind) {
    case AgentKind::lexical:
      for (auto& p : LexicalAgentParams::grid()) push(p);
      break;
    case AgentKind::semantic: {
      const auto& base = std::get<SemanticAgentParams>(spec.params);
      for (auto p : SemanticAgentParams::grid(base.embedder, base.nli)) {
        p.source_query_affinity = base.source_query_affinity;
        push(p);
      }
      break;
    }
    case AgentKind::llm: {
      const auto& base = std::get<LlmAgentParams>(spec.params);
      for (auto p : LlmAgentParams::grid(base.generator)) {
        p.generation = base.generation;
        p.prompt_template = base.prompt_template;
        push(p);
      }
      break;
    }
    default:
      out.push_back(spec);
  }
  return out;
}

struct OfflineUnit {
  std::size_t topic;
  Query query;
  std::size_t owner;
  std::uint64_t seed;
};

std::string params_digest(const DocumentAgentSpec& s) {
  const std::string d = s.id().params_digest;
  return d.empty() ? "-" : d;
}

}  // namespace

OfflineResult run_offline_promotion(const ExperimentConfig& config, const RunOptions& options) {
  Run run = prepare(config, options);
  Progress progress(options.progress);

  std::vector<std::vector<Document>> initial;
  for (const auto& t : run.data.topics) {
    auto docs = run.data.documents_of(t.id, config.offline_round);
    if (docs.size() < 2) {
      fail(ErrorCode::insufficient_documents, "topic " + t.id + " has " + std::to_string(docs.size()) +
                                                  " documents in round " + std::to_string(config.offline_round));
    }
    initial.push_back(std::move(docs));
  }
  std::vector<OfflineUnit> units;
  for (std::uint64_t seed : config.seeds) {
    for (std::size_t ti = 0; ti < run.data.topics.size(); ++ti) {
      const Topic& topic = run.data.topics[ti];
      const auto qs = config.query_agents.empty()
                          ? run.data.queries_of(topic.id)
                          : queries_for(topic, config.query_agents.front(), run.data, run.providers, seed);
      for (const auto& q : qs) {
        for (std::size_t k = 0; k < initial[ti].size(); ++k) {
          units.push_back({ti, q, k, derive_seed(seed, "offline/" + topic.id + "/" + q.id + "/" + std::to_string(k))});
        }
      }
    }
  }
  if (units.empty()) fail(ErrorCode::empty_input, "offline promotion has no units");

  const SimulationResources sim_res{&run.providers, run.stats(), Execution::serial, {}};
  auto competition = [&](const DocumentAgentSpec& agent, const RankerSpec& ranker, std::size_t ai, std::size_t ri,
                         std::size_t ui) {
    const OfflineUnit& u = units[ui];
    const auto& pool = initial[u.topic];
    std::vector<Document> docs;
    docs.push_back(pool[u.owner]);
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (k != u.owner) docs.push_back(pool[k]);
    }
    SimulationConfig sc;
    sc.rounds = config.rounds;
    sc.agents.push_back(agent);
    for (std::size_t k = 1; k < docs.size(); ++k) sc.agents.push_back({"static", AgentKind::static_agent, {}});
    sc.ranker = ranker;
    sc.queries = {u.query};
    sc.seed = u.seed;
    sc.max_terms = config.max_terms;
    sc.random_pairing = false;
    CompetitionLog log = run_competition(sc, docs, sim_res);
    log.labels = {{"experiment", "offline_promotion"},
                  {"config_hash", run.hash},
                  {"agent", agent.name},
                  {"ranker", ranker.name},
                  {"params", params_digest(agent)},
                  {"evaluated_slot", slot_name(0)},
                  {"agent_index", padded(ai, 3)},
                  {"ranker_index", padded(ri, 3)},
                  {"unit", padded(ui, 6)}};
    return log;
  };

  OfflineResult result;
  std::vector<std::string> log_files;
  for (std::size_t ai = 0; ai < config.document_agents.size(); ++ai) {
    const auto& agent = config.document_agents[ai];
    const auto configs = candidate_configs(agent, config.grid_search);
    for (std::size_t ri = 0; ri < config.rankers.size(); ++ri) {
      const auto& ranker = config.rankers[ri];
      std::vector<double> promo(configs.size() * units.size());
      for_each_index(promo.size(), options.exec, [&](std::size_t k) {
        const std::size_t ci = k / units.size(), ui = k % units.size();
        promo[k] = evaluated_promotion(competition(configs[ci], ranker, ai, ri, ui));
      });
      std::size_t best = 0;
      std::vector<double> means(configs.size(), 0.0);
      for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        double sum = 0.0;
        for (std::size_t ui = 0; ui < units.size(); ++ui) sum += promo[ci * units.size() + ui];
        means[ci] = sum / static_cast<double>(units.size());
        result.grid.push_back({agent.name, ranker.name, params_digest(configs[ci]), means[ci], units.size()});
        if (means[ci] > means[best]) best = ci;
      }
      std::vector<CompetitionLog> logs(units.size());
      for_each_index(units.size(), options.exec,
                     [&](std::size_t ui) { logs[ui] = competition(configs[best], ranker, ai, ri, ui); });
      for (auto& l : logs) result.best_logs.push_back(std::move(l));
      progress.line("offline " + agent.name + " / " + ranker.name + ": best " + params_digest(configs[best]) + " over " +
                    std::to_string(configs.size()) + " configurations");
    }
  }
  result.summary = summarize_offline(result.best_logs);

  if (options.write_outputs) {
    result.directory = run.dir;
    for (const auto& log : result.best_logs) {
      const std::string name = "logs/" + log.labels.at("agent_index") + "-" + log.labels.at("ranker_index") + "-" +
                               log.labels.at("unit") + ".jsonl";
      save_log(run.dir / name, log);
      log_files.push_back(name);
    }
    CsvTable grid{{"agent", "ranker", "params", "mean_scaled_promotion", "units"}, {}};
    for (const auto& g : result.grid) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.6f", g.mean);
      grid.rows.push_back({g.agent, g.ranker, g.params, buf, std::to_string(g.units)});
    }
    write_file(run.dir / "grid.csv", grid.to_csv(run.hash));
    write_file(run.dir / "promotion_matrix.csv", result.summary.matrix().to_csv(run.hash));
    write_file(run.dir / "promotion.csv", result.summary.long_table().to_csv(run.hash));
    std::vector<std::string> files{"grid.csv", "promotion_matrix.csv", "promotion.csv"};
    files.insert(files.end(), log_files.begin(), log_files.end());
    write_manifest(run, files);
  }
  return result;
}

// ---------------------------------------------------------------------------

OnlineResult run_online_simulation(const ExperimentConfig& config, const RunOptions& options) {
  Run run = prepare(config, options);
  Progress progress(options.progress);
  const auto queries = all_queries(run);

  struct Job {
    std::size_t ranker, qagent, topic;
    Query query;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t ri = 0; ri < config.rankers.size(); ++ri) {
    for (std::size_t qi = 0; qi < config.query_agents.size(); ++qi) {
      for (std::size_t ti = 0; ti < run.data.topics.size(); ++ti) {
        for (const auto& q : queries[qi][ti]) {
          for (std::uint64_t seed : config.seeds) {
            jobs.push_back({ri, qi, ti, q, derive_seed(seed, "online/" + run.data.topics[ti].id + "/" + q.id)});
          }
        }
      }
    }
  }

  OnlineResult result;
  result.logs.resize(jobs.size());
  std::vector<std::string> files(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) files[i] = "logs/" + padded(i, 6) + ".jsonl";

  for_each_index(jobs.size(), options.exec, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Topic& topic = run.data.topics[job.topic];
    SimulationConfig sc;
    sc.rounds = config.rounds;
    sc.agents = config.document_agents;
    sc.ranker = config.rankers[job.ranker];
    sc.queries = {job.query};
    sc.seed = job.seed;
    sc.max_terms = config.max_terms;
    std::map<std::string, std::string> labels{{"experiment", "online_simulation"},
                                              {"config_hash", run.hash},
                                              {"ranker", sc.ranker.name},
                                              {"query_agent", config.query_agents[job.qagent].name},
                                              {"run", padded(i, 6)}};
    for (std::size_t a = 0; a < sc.agents.size(); ++a) labels["agent." + slot_name(a)] = sc.agents[a].name;

    const SimulationResources res{&run.providers, run.stats(), Execution::serial, {}};
    const auto docs = run.data.documents_of(topic.id, run.data.last_round(topic.id));
    try {
      result.logs[i] = run_competition(sc, docs, res);
      result.logs[i].labels = labels;
    } catch (const CompetitionFailed& e) {
      if (options.write_outputs) {
        CompetitionLog partial = e.log();
        partial.labels = labels;
        save_log(run.dir / files[i], partial);
      }
      throw;
    }
    progress.step("competitions", jobs.size());
  });
  result.summary = summarize_online(result.logs);

  if (options.write_outputs) {
    result.directory = run.dir;
    for (std::size_t i = 0; i < jobs.size(); ++i) save_log(run.dir / files[i], result.logs[i]);
    write_file(run.dir / "avg_rank_by_round.csv", result.summary.by_round_table().to_csv(run.hash));
    write_file(run.dir / "avg_rank.csv", result.summary.overall_table().to_csv(run.hash));
    write_file(run.dir / "static_avg_rank.csv", result.summary.static_table().to_csv(run.hash));
    std::vector<std::string> all{"avg_rank_by_round.csv", "avg_rank.csv", "static_avg_rank.csv"};
    all.insert(all.end(), files.begin(), files.end());
    write_manifest(run, all);
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<fs::path> regenerate_report(const fs::path& run_dir) {
  const json manifest = json::parse(read_file(run_dir / "manifest.json"), nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("experiment") || !manifest.contains("config_hash")) {
    fail(ErrorCode::malformed_file, run_dir.string() + "/manifest.json is not a run manifest");
  }
  const auto kind = parse_experiment_kind(manifest["experiment"].get<std::string>());
  const std::string hash = manifest["config_hash"].get<std::string>();
  const fs::path out = run_dir / "report";
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const CsvTable& table) {
    write_file(out / name, table.to_csv(hash));
    written.push_back(out / name);
  };

  auto load_logs = [&] {
    std::vector<fs::path> paths;
    if (fs::exists(run_dir / "logs")) {
      for (const auto& e : fs::directory_iterator(run_dir / "logs")) {
        if (e.path().extension() == ".jsonl") paths.push_back(e.path());
      }
    }
    std::sort(paths.begin(), paths.end());
    std::vector<CompetitionLog> logs;
    for (const auto& p : paths) {
      auto log = load_log(p);
      if (!log.complete) fail(ErrorCode::malformed_file, p.string() + " is an incomplete log: " + log.error);
      if (log.labels.count("config_hash") && log.labels.at("config_hash") != hash) {
        fail(ErrorCode::malformed_file, p.string() + " belongs to another configuration");
      }
      logs.push_back(std::move(log));
    }
    if (logs.empty()) fail(ErrorCode::malformed_file, run_dir.string() + " has no logs");
    return logs;
  };

  switch (kind) {
    case ExperimentKind::effectiveness: {
      const auto records = eval_records_from_jsonl(read_file(run_dir / "evaluations.jsonl"));
      const json cfg = json::parse(read_file(run_dir / "config.json"), nullptr, false);
      const double alpha = cfg.is_object() ? cfg.value("alpha", 0.05) : 0.05;
      const auto summary = summarize_effectiveness(records, alpha);
      emit("effectiveness.csv", summary.table());
      emit("comparisons.csv", summary.comparisons_table());
      break;
    }
    case ExperimentKind::offline_promotion: {
      const auto summary = summarize_offline(load_logs());
      emit("promotion_matrix.csv", summary.matrix());
      emit("promotion.csv", summary.long_table());
      break;
    }
    case ExperimentKind::online_simulation: {
      const auto summary = summarize_online(load_logs());
      emit("avg_rank_by_round.csv", summary.by_round_table());
      emit("avg_rank.csv", summary.overall_table());
      emit("static_avg_rank.csv", summary.static_table());
      break;
    }
  }
  return written;
}

}  // namespace arena
