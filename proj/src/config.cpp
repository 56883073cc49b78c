// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "arena/error.hpp"
#include "arena/experiments.hpp"
#include "arena/prompts.hpp"
#include "arena/remote_providers.hpp"
#include "arena/rng.hpp"

namespace arena {

using json = nlohmann::json;

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::effectiveness: return "effectiveness";
    case ExperimentKind::offline_promotion: return "offline_promotion";
    case ExperimentKind::online_simulation: return "online_simulation";
  }
  return "online_simulation";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "effectiveness") return ExperimentKind::effectiveness;
  if (name == "offline_promotion") return ExperimentKind::offline_promotion;
  if (name == "online_simulation") return ExperimentKind::online_simulation;
  fail(ErrorCode::config_error, "unknown experiment '" + std::string(name) + "'");
}

namespace {

// Strict object reader: wrong types and unknown keys are config errors.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(ErrorCode::config_error, where_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    return convert<T>(*it, key);
  }

  template <class T>
  T need(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) fail(ErrorCode::config_error, where_ + ": missing key '" + key + "'");
    return convert<T>(*it, key);
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) fail(ErrorCode::config_error, where_ + ": unknown key '" + it.key() + "'");
    }
  }

  const std::string& where() const { return where_; }

 private:
  template <class T>
  T convert(const json& v, const char* key) const {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("bool");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("string");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      fail(ErrorCode::config_error, where_ + ": key '" + key + "' has the wrong type");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

GenerationParams read_generation(Reader& r, GenerationParams g) {
  g.temperature = r.get("temperature", g.temperature);
  g.top_p = r.get("top_p", g.top_p);
  g.max_tokens = r.get("max_tokens", g.max_tokens);
  return g;
}

std::string read_template(Reader& r) {
  std::string text = r.get<std::string>("prompt_template", "");
  const std::string file = r.get<std::string>("prompt_template_file", "");
  if (!file.empty()) {
    if (!text.empty()) fail(ErrorCode::config_error, r.where() + ": give prompt_template or prompt_template_file, not both");
    text = load_template(file);
  }
  return text;
}

RankerSpec read_ranker(const json& j, std::size_t i) {
  Reader r(j, "rankers[" + std::to_string(i) + "]");
  RankerSpec s;
  s.name = r.need<std::string>("name");
  s.kind = parse_ranker_kind(r.need<std::string>("kind"));
  s.k1 = r.get("k1", s.k1);
  s.b = r.get("b", s.b);
  s.provider = r.get<std::string>("provider", "");
  r.finish();
  return s;
}

QueryAgentSpec read_query_agent(const json& j, std::size_t i) {
  Reader r(j, "query_agents[" + std::to_string(i) + "]");
  QueryAgentSpec s;
  s.name = r.need<std::string>("name");
  s.kind = parse_query_agent_kind(r.need<std::string>("kind"));
  s.k = r.get("k", s.k);
  s.pool_size = r.get("pool_size", s.pool_size);
  s.path = r.get<std::string>("path", "");
  s.generator = r.get<std::string>("generator", "");
  s.embedder = r.get<std::string>("embedder", "");
  s.generation = read_generation(r, s.generation);
  s.prompt_template = read_template(r);
  r.finish();
  return s;
}

DocumentAgentSpec read_document_agent(const json& j, std::size_t i) {
  Reader r(j, "document_agents[" + std::to_string(i) + "]");
  DocumentAgentSpec s;
  s.name = r.need<std::string>("name");
  s.kind = parse_agent_kind(r.need<std::string>("kind"));
  switch (s.kind) {
    case AgentKind::lexical: {
      LexicalAgentParams p;
      p.lambda = r.get("lambda", p.lambda);
      p.m = r.get("m", p.m);
      p.eta = r.get("eta", p.eta);
      s.params = p;
      break;
    }
    case AgentKind::semantic: {
      SemanticAgentParams p;
      p.strategy = parse_candidate_strategy(r.get<std::string>("strategy", std::string(to_string(p.strategy))));
      p.lambda = r.get("lambda", p.lambda);
      p.eta = r.get("eta", p.eta);
      p.embedder = r.get("embedder", p.embedder);
      p.nli = r.get("nli", p.nli);
      p.source_query_affinity = r.get("source_query_affinity", p.source_query_affinity);
      s.params = p;
      break;
    }
    case AgentKind::llm: {
      LlmAgentParams p;
      p.strategy = parse_prompt_strategy(r.get<std::string>("strategy", std::string(to_string(p.strategy))));
      p.no_copy = r.get("no_copy", p.no_copy);
      p.generator = r.get("generator", p.generator);
      p.generation = read_generation(r, p.generation);
      p.prompt_template = read_template(r);
      s.params = p;
      break;
    }
    case AgentKind::static_agent:
      break;
    case AgentKind::human:
      fail(ErrorCode::config_error, r.where() + ": human is not a simulated document agent");
  }
  r.finish();
  return s;
}

json generation_json(const GenerationParams& g) {
  return {{"temperature", g.temperature}, {"top_p", g.top_p}, {"max_tokens", g.max_tokens}};
}

template <class T>
std::vector<T> read_list(const json& j, const char* what, T (*reader)(const json&, std::size_t)) {
  if (!j.is_array()) fail(ErrorCode::config_error, std::string(what) + ": expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(reader(j[i], i));
  return out;
}

std::vector<std::string> read_strings(Reader& r, const char* key) {
  if (!r.has(key)) return {};
  const json& v = r.raw(key);
  if (!v.is_array()) fail(ErrorCode::config_error, r.where() + ": key '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) fail(ErrorCode::config_error, r.where() + ": key '" + key + "' must list strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorCode::config_error, msg);
  };
  need(!name.empty(), "config: name must not be empty");
  need(rounds >= 1, "config: rounds must be >= 1");
  need(!seeds.empty(), "config: seeds must not be empty");
  need(max_terms >= 1, "config: max_terms must be >= 1");
  need(!rankers.empty(), "config: at least one ranker is required");
  need(alpha > 0.0 && alpha < 1.0, "config: alpha must be in (0, 1)");
  need(!dataset.path.empty() || dataset.synthetic.has_value(), "config: dataset needs a path or a synthetic spec");
  if (dataset.synthetic) dataset.synthetic->validate();
  std::set<std::string> names;
  for (const auto& r : rankers) {
    r.validate();
    need(names.insert("r/" + r.name).second, "config: duplicate ranker name " + r.name);
  }
  for (const auto& q : query_agents) {
    if (!(q.kind == QueryAgentKind::human_file && q.path.empty())) q.validate();
    need(names.insert("q/" + q.name).second, "config: duplicate query agent name " + q.name);
  }
  for (const auto& d : document_agents) {
    d.validate();
    need(names.insert("d/" + d.name).second, "config: duplicate document agent name " + d.name);
  }
  switch (experiment) {
    case ExperimentKind::effectiveness:
      need(!query_agents.empty(), "effectiveness: at least one query agent is required");
      need(!corpora.empty(), "effectiveness: at least one corpus kind is required");
      need(first_round >= 1, "effectiveness: first_round must be >= 1");
      break;
    case ExperimentKind::offline_promotion:
      need(!document_agents.empty(), "offline_promotion: at least one document agent is required");
      need(rounds >= 2, "offline_promotion: rounds must be >= 2");
      break;
    case ExperimentKind::online_simulation:
      need(!query_agents.empty(), "online_simulation: at least one query agent is required");
      need(document_agents.size() >= 2, "online_simulation: at least two document agents are required");
      break;
  }
  need(providers.mode == "stub" || providers.mode == "remote", "config: providers.mode must be stub or remote");
}

ExperimentConfig config_from_json(const json& j) {
  Reader r(j, "config");
  const int version = r.get("version", kConfigVersion);
  if (version != kConfigVersion) fail(ErrorCode::config_error, "config: unsupported version " + std::to_string(version));
  ExperimentConfig c;
  c.experiment = parse_experiment_kind(r.need<std::string>("experiment"));
  c.name = r.get("name", c.name);
  if (r.has("dataset")) {
    Reader d(r.raw("dataset"), "dataset");
    c.dataset.path = d.get<std::string>("path", "");
    c.dataset.judgments = d.get<std::string>("judgments", "");
    if (d.has("synthetic")) {
      Reader s(d.raw("synthetic"), "dataset.synthetic");
      SyntheticSpec spec;
      spec.topics = s.get("topics", spec.topics);
      spec.rounds = s.get("rounds", spec.rounds);
      spec.human_docs = s.get("human_docs", spec.human_docs);
      spec.llm_docs = s.get("llm_docs", spec.llm_docs);
      spec.queries_per_topic = s.get("queries_per_topic", spec.queries_per_topic);
      spec.mixed_gap_points = s.get("mixed_gap_points", spec.mixed_gap_points);
      spec.seed = s.get("seed", spec.seed);
      spec.human_key_scale = s.get("human_key_scale", spec.human_key_scale);
      spec.llm_key_rate = s.get("llm_key_rate", spec.llm_key_rate);
      spec.llm_related_rate = s.get("llm_related_rate", spec.llm_related_rate);
      spec.related_embedder = s.get("related_embedder", spec.related_embedder);
      s.finish();
      c.dataset.synthetic = spec;
    }
    d.finish();
  }
  if (r.has("rankers")) c.rankers = read_list<RankerSpec>(r.raw("rankers"), "rankers", read_ranker);
  if (r.has("query_agents")) {
    c.query_agents = read_list<QueryAgentSpec>(r.raw("query_agents"), "query_agents", read_query_agent);
  }
  if (r.has("document_agents")) {
    c.document_agents =
        read_list<DocumentAgentSpec>(r.raw("document_agents"), "document_agents", read_document_agent);
  }
  if (r.has("corpora")) {
    c.corpora.clear();
    for (const auto& name : read_strings(r, "corpora")) {
      try {
        c.corpora.push_back(parse_corpus_kind(name));
      } catch (const ArenaError&) {
        fail(ErrorCode::config_error, "config: unknown corpus kind '" + name + "'");
      }
    }
  }
  c.rounds = r.get("rounds", c.rounds);
  c.first_round = r.get("first_round", c.first_round);
  if (r.has("seeds")) {
    const json& s = r.raw("seeds");
    if (!s.is_array()) fail(ErrorCode::config_error, "config: seeds must be a list of integers");
    c.seeds.clear();
    for (const auto& v : s) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(ErrorCode::config_error, "config: seeds must be non-negative integers");
      c.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  c.max_terms = r.get("max_terms", c.max_terms);
  c.background_stats = r.get("background_stats", c.background_stats);
  c.grid_search = r.get("grid_search", c.grid_search);
  c.offline_round = r.get("offline_round", c.offline_round);
  c.alpha = r.get("alpha", c.alpha);
  if (r.has("providers")) {
    Reader p(r.raw("providers"), "providers");
    auto& pc = c.providers;
    pc.mode = p.get("mode", pc.mode);
    pc.stub_seed = p.get("stub_seed", pc.stub_seed);
    pc.embedders = read_strings(p, "embedders");
    pc.generators = read_strings(p, "generators");
    pc.relevance = read_strings(p, "relevance");
    pc.nli = read_strings(p, "nli");
    pc.embed_url = p.get("embed_url", pc.embed_url);
    pc.llm_url = p.get("llm_url", pc.llm_url);
    pc.nli_url = p.get("nli_url", pc.nli_url);
    pc.max_retries = p.get("max_retries", pc.max_retries);
    pc.max_in_flight = p.get("max_in_flight", pc.max_in_flight);
    pc.timeout_ms = p.get("timeout_ms", pc.timeout_ms);
    p.finish();
  }
  c.output_dir = r.get<std::string>("output_dir", c.output_dir.string());
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::config_error, "cannot read config " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::config_error, "config " + path.string() + " is not valid JSON");
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["version"] = kConfigVersion;
  j["experiment"] = to_string(c.experiment);
  j["name"] = c.name;
  json d = {{"path", c.dataset.path.string()}, {"judgments", c.dataset.judgments.string()}};
  if (c.dataset.synthetic) {
    const auto& s = *c.dataset.synthetic;
    d["synthetic"] = {{"topics", s.topics},
                      {"rounds", s.rounds},
                      {"human_docs", s.human_docs},
                      {"llm_docs", s.llm_docs},
                      {"queries_per_topic", s.queries_per_topic},
                      {"mixed_gap_points", s.mixed_gap_points},
                      {"seed", s.seed},
                      {"human_key_scale", s.human_key_scale},
                      {"llm_key_rate", s.llm_key_rate},
                      {"llm_related_rate", s.llm_related_rate}};
    if (!s.related_embedder.empty()) d["synthetic"]["related_embedder"] = s.related_embedder;
  }
  j["dataset"] = d;
  j["rankers"] = json::array();
  for (const auto& r : c.rankers) {
    j["rankers"].push_back(
        {{"name", r.name}, {"kind", to_string(r.kind)}, {"k1", r.k1}, {"b", r.b}, {"provider", r.provider}});
  }
  j["query_agents"] = json::array();
  for (const auto& q : c.query_agents) {
    json e = {{"name", q.name},         {"kind", to_string(q.kind)}, {"k", q.k},
              {"pool_size", q.pool_size}, {"path", q.path.string()}, {"generator", q.generator},
              {"embedder", q.embedder},   {"prompt_template", q.prompt_template}};
    e.update(generation_json(q.generation));
    j["query_agents"].push_back(e);
  }
  j["document_agents"] = json::array();
  for (const auto& a : c.document_agents) {
    json e = {{"name", a.name}, {"kind", to_string(a.kind)}};
    if (const auto* p = std::get_if<LexicalAgentParams>(&a.params)) {
      e.update({{"lambda", p->lambda}, {"m", p->m}, {"eta", p->eta}});
    } else if (const auto* p = std::get_if<SemanticAgentParams>(&a.params)) {
      e.update({{"strategy", to_string(p->strategy)},
                {"lambda", p->lambda},
                {"eta", p->eta},
                {"embedder", p->embedder},
                {"nli", p->nli},
                {"source_query_affinity", p->source_query_affinity}});
    } else if (const auto* p = std::get_if<LlmAgentParams>(&a.params)) {
      e.update({{"strategy", to_string(p->strategy)},
                {"no_copy", p->no_copy},
                {"generator", p->generator},
                {"prompt_template", p->prompt_template}});
      e.update(generation_json(p->generation));
    }
    j["document_agents"].push_back(e);
  }
  j["corpora"] = json::array();
  for (auto k : c.corpora) j["corpora"].push_back(to_string(k));
  j["rounds"] = c.rounds;
  j["first_round"] = c.first_round;
  j["seeds"] = c.seeds;
  j["max_terms"] = c.max_terms;
  j["background_stats"] = c.background_stats;
  j["grid_search"] = c.grid_search;
  j["offline_round"] = c.offline_round;
  j["alpha"] = c.alpha;
  const auto& p = c.providers;
  j["providers"] = {{"mode", p.mode},           {"stub_seed", p.stub_seed},     {"embedders", p.embedders},
                    {"generators", p.generators}, {"relevance", p.relevance},     {"nli", p.nli},
                    {"embed_url", p.embed_url},   {"llm_url", p.llm_url},         {"nli_url", p.nli_url},
                    {"max_retries", p.max_retries}, {"max_in_flight", p.max_in_flight}, {"timeout_ms", p.timeout_ms}};
  j["output_dir"] = c.output_dir.string();
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  // nlohmann::json objects are key-sorted, so dump() is canonical. Where the
  // outputs go does not change what they contain.
  json j = config_to_json(config);
  j.erase("output_dir");
  return hex64(fnv1a64(j.dump()));
}

std::filesystem::path run_directory(const ExperimentConfig& config) {
  return config.output_dir / (config.name + "-" + config_hash(config));
}

ProviderRegistry build_providers(const ProvidersConfig& config) {
  ProviderRegistry reg = ProviderRegistry::local_stubs(config.stub_seed);
  if (config.mode == "stub") return reg;

  auto endpoint = [&](const std::string& url, const char* env) {
    RemoteEndpoint ep;
    if (!url.empty()) {
      ep.url = url;
      if (const char* key = std::getenv("ARENA_API_KEY")) ep.api_key = key;
    } else if (auto from_env = endpoint_from_env(env)) {
      ep = *from_env;
    } else {
      fail(ErrorCode::config_error, std::string("remote providers need ") + env + " or a url in the config");
    }
    ep.max_retries = config.max_retries;
    ep.max_in_flight = config.max_in_flight;
    ep.timeout = std::chrono::milliseconds(config.timeout_ms);
    return ep;
  };
  for (const auto& tag : config.embedders) {
    reg.add(std::make_shared<const RemoteEmbedder>(tag, endpoint(config.embed_url, "ARENA_EMBED_URL")));
  }
  for (const auto& tag : config.generators) {
    reg.add(std::make_shared<const RemoteGenerator>(tag, endpoint(config.llm_url, "ARENA_LLM_URL")));
  }
  for (const auto& tag : config.relevance) {
    reg.add(std::make_shared<const RemoteRelevance>(tag, endpoint(config.llm_url, "ARENA_LLM_URL")));
  }
  for (const auto& tag : config.nli) {
    reg.add(std::make_shared<const RemoteEntailment>(tag, endpoint(config.nli_url, "ARENA_NLI_URL")));
  }
  return reg;
}

Dataset load_experiment_dataset(const ExperimentConfig& config, const ProviderRegistry& providers,
                                const std::filesystem::path& rejects_dir) {
  if (const auto& s = config.dataset.synthetic) {
    return make_synthetic_dataset(*s, s->related_embedder.empty() ? nullptr : &providers.embedder(s->related_embedder));
  }
  IngestResult in = ingest_dataset(config.dataset.path, kDatasetFormat, config.max_terms);
  if (!rejects_dir.empty() && !in.rejects.empty()) write_rejects(rejects_dir / "rejects.jsonl", in.rejects);
  if (!config.dataset.judgments.empty()) {
    const auto judgments = load_judgments(config.dataset.judgments);
    apply_judgments(in.data, judgments);
  }
  if (in.data.topics.empty()) fail(ErrorCode::empty_input, "dataset " + config.dataset.path.string() + " has no topics");
  return std::move(in.data);
}

std::vector<Query> queries_for(const Topic& topic, const QueryAgentSpec& spec, const Dataset& data,
                               const ProviderRegistry& providers, std::uint64_t seed) {
  if (spec.kind == QueryAgentKind::human_file && spec.path.empty()) {
    auto qs = data.queries_of(topic.id);
    if (qs.empty()) fail(ErrorCode::missing_topic, "dataset has no queries for topic " + topic.id);
    if (qs.size() > static_cast<std::size_t>(spec.k)) qs.resize(static_cast<std::size_t>(spec.k));
    return qs;
  }
  QueryAgentSpec s = spec;
  s.generation.seed = derive_seed(seed, "queries/" + spec.name + "/" + topic.id);
  return generate_queries(topic, s, QueryAgentResources{&providers, nullptr});
}

}  // namespace arena
