// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/query_agents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>

#include "arena/error.hpp"
#include "arena/prompts.hpp"
#include "arena/rankers.hpp"
#include "arena/rng.hpp"

namespace arena {

std::string_view to_string(QueryAgentKind kind) {
  switch (kind) {
    case QueryAgentKind::human_file: return "human";
    case QueryAgentKind::lexical: return "lexical";
    case QueryAgentKind::semantic: return "semantic";
    case QueryAgentKind::llm: return "llm";
  }
  return "lexical";
}

QueryAgentKind parse_query_agent_kind(std::string_view name) {
  if (name == "human" || name == "human_file") return QueryAgentKind::human_file;
  if (name == "lexical") return QueryAgentKind::lexical;
  if (name == "semantic") return QueryAgentKind::semantic;
  if (name == "llm") return QueryAgentKind::llm;
  fail(ErrorCode::config_error, "unknown query agent kind '" + std::string(name) + "'");
}

void QueryAgentSpec::validate() const {
  if (k < 1) fail(ErrorCode::config_error, "query agent " + name + ": k must be >= 1");
  if (kind == QueryAgentKind::semantic) {
    if (pool_size < k) fail(ErrorCode::config_error, "query agent " + name + ": pool_size must be >= k");
    if (generator.empty() || embedder.empty()) {
      fail(ErrorCode::config_error, "query agent " + name + " needs generator and embedder tags");
    }
  }
  if (kind == QueryAgentKind::llm && generator.empty()) {
    fail(ErrorCode::config_error, "query agent " + name + " needs a generator tag");
  }
  if (kind == QueryAgentKind::human_file && path.empty()) {
    fail(ErrorCode::config_error, "query agent " + name + " needs a variations file");
  }
}

namespace {

AgentId query_origin(AgentKind kind, const std::string& tag, const std::string& params) {
  return AgentId{kind, tag, hex64(fnv1a64(params)).substr(0, 8)};
}

Query make_query(const Topic& topic, const AgentId& origin, std::size_t index, std::string text) {
  return Query{topic.id + "/" + std::string(to_string(origin.kind)) + "-" + origin.model_tag + "/" +
                   std::to_string(index + 1),
               topic.id, std::move(text), origin};
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<Query> load_human_variations(const std::filesystem::path& path, std::string_view topic_id, int k) {
  if (k < 1) fail(ErrorCode::invalid_argument, "k must be >= 1");
  std::ifstream in(path);
  if (!in) fail(ErrorCode::malformed_file, "cannot open query variations file " + path.string());
  struct Variation {
    std::string text;
    long long frequency;
  };
  std::vector<Variation> found;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto tid = j.at("topic_id").get<std::string>();
      auto text = j.at("query_text").get<std::string>();
      auto freq = j.at("frequency").get<long long>();
      if (freq < 0) fail(ErrorCode::malformed_file, "negative frequency");
      if (tid == topic_id && !tokenize(text).empty()) found.push_back({std::move(text), freq});
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::malformed_file, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ArenaError& e) {
      fail(ErrorCode::malformed_file, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (found.empty()) fail(ErrorCode::missing_topic, "no query variations for topic " + std::string(topic_id));
  std::sort(found.begin(), found.end(), [](const Variation& a, const Variation& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.text < b.text;
  });
  Topic topic{std::string(topic_id), "", {}};
  const AgentId origin = query_origin(AgentKind::human, "file", path.filename().string());
  std::vector<Query> out;
  for (std::size_t i = 0; i < found.size() && out.size() < static_cast<std::size_t>(k); ++i) {
    out.push_back(make_query(topic, origin, i, found[i].text));
  }
  return out;
}

std::vector<Keyphrase> extract_keyphrases(std::string_view backstory, int max_phrase_len,
                                          const StopwordList& stopwords) {
  if (max_phrase_len < 1) fail(ErrorCode::invalid_argument, "max_phrase_len must be >= 1");
  const auto all = tokenize(backstory);
  std::map<std::string, std::size_t> first_pos;
  std::map<std::string, std::size_t> tf;
  std::size_t max_tf = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    first_pos.try_emplace(all[i], i);
    ++tf[all[i]];
    if (!stopwords.contains(all[i])) max_tf = std::max(max_tf, tf[all[i]]);
  }
  auto weight = [&](const std::string& t) {
    return std::log(3.0 + static_cast<double>(first_pos.at(t))) * static_cast<double>(max_tf) /
           static_cast<double>(tf.at(t));
  };

  std::vector<Keyphrase> out;
  std::set<std::string> seen;
  for (const auto& sentence : split_sentences(backstory)) {
    const auto toks = tokenize(sentence);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (stopwords.contains(toks[i])) continue;
      for (std::size_t n = 1; n <= static_cast<std::size_t>(max_phrase_len) && i + n <= toks.size(); ++n) {
        if (stopwords.contains(toks[i + n - 1])) continue;
        std::vector<std::string> terms(toks.begin() + static_cast<long>(i), toks.begin() + static_cast<long>(i + n));
        std::string text;
        for (const auto& t : terms) text += (text.empty() ? "" : " ") + t;
        if (!seen.insert(text).second) continue;
        double score = 1.0;
        for (const auto& t : terms) {
          if (!stopwords.contains(t)) score *= weight(t);
        }
        out.push_back({std::move(text), std::move(terms), score});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Keyphrase& a, const Keyphrase& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.text < b.text;
  });
  return out;
}

std::vector<Query> lexical_query_agent(const Topic& topic, const TermStats& stats, int k, const std::string& agent_tag,
                                       const StopwordList& stopwords) {
  if (k < 1) fail(ErrorCode::invalid_argument, "k must be >= 1");
  const auto phrases = extract_keyphrases(topic.backstory, 3, stopwords);
  if (phrases.empty()) fail(ErrorCode::no_candidates, "no keyphrases in the backstory of topic " + topic.id);
  const auto doc = tokenize(topic.backstory);
  struct Scored {
    const Keyphrase* phrase;
    double score;
  };
  std::vector<Scored> scored;
  for (const auto& p : phrases) {
    const double s = bm25_score(p.terms, doc, stats);
    if (s > 0.0) scored.push_back({&p, s});
  }
  if (scored.empty()) fail(ErrorCode::no_candidates, "no keyphrase of topic " + topic.id + " scores above 0");
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.phrase->text < b.phrase->text;
  });
  const AgentId origin = query_origin(AgentKind::lexical, agent_tag, "k=" + std::to_string(k));
  std::vector<Query> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < static_cast<std::size_t>(k); ++i) {
    out.push_back(make_query(topic, origin, i, scored[i].phrase->text));
  }
  return out;
}

std::vector<std::string> parse_list_response(std::string_view response) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    auto nl = response.find('\n', pos);
    std::string line = trim(response.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? response.size() + 1 : nl + 1;

    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')' || line[i] == ':')) {
      line = trim(line.substr(i + 1));
    } else if (!line.empty() && (line[0] == '-' || line[0] == '*' || line[0] == '+')) {
      line = trim(line.substr(1));
    } else if (line.rfind("\xE2\x80\xA2", 0) == 0) {
      line = trim(line.substr(3));
    }
    if (line.size() >= 2 && (line.front() == '"' || line.front() == '\'') && line.back() == line.front()) {
      line = trim(line.substr(1, line.size() - 2));
    }
    if (tokenize(line).empty()) continue;
    items.push_back(std::move(line));
  }
  return items;
}

std::vector<Query> semantic_query_agent(const Topic& topic, const TextGenerator& generator, const Embedder& embedder,
                                        int pool_size, int k, const GenerationParams& params,
                                        const std::string& prompt_template) {
  if (k < 1 || pool_size < k) fail(ErrorCode::invalid_argument, "need 1 <= k <= pool_size");
  const std::string prompt = render_template(prompt_template.empty() ? prompts::kDoc2Query : prompt_template,
                                             {{"backstory", topic.backstory}, {"count", std::to_string(pool_size)}});
  const auto items = parse_list_response(generator.generate(prompt, params));

  std::vector<std::string> pool;
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (pool.size() == static_cast<std::size_t>(pool_size)) break;
    if (seen.insert(fold_case(item)).second) pool.push_back(item);
  }
  if (pool.size() < static_cast<std::size_t>(k)) {
    fail(ErrorCode::pool_too_small, "topic " + topic.id + ": " + std::to_string(pool.size()) +
                                        " unique variations, need " + std::to_string(k));
  }

  std::vector<std::string> texts;
  texts.reserve(pool.size() + 1);
  texts.push_back(topic.backstory);
  texts.insert(texts.end(), pool.begin(), pool.end());
  const auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size()) fail(ErrorCode::malformed_response, "embedder returned the wrong number of vectors");

  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < pool.size(); ++i) scored.emplace_back(cosine(vectors[0].values, vectors[i + 1].values), i);
  std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return pool[a.second] < pool[b.second];
  });

  const AgentId origin = query_origin(AgentKind::semantic, embedder.tag(),
                                      generator.tag() + "|pool=" + std::to_string(pool_size) + "|k=" + std::to_string(k));
  std::vector<Query> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    out.push_back(make_query(topic, origin, i, pool[scored[i].second]));
  }
  return out;
}

std::vector<Query> llm_query_agent(const Topic& topic, const TextGenerator& generator, int k,
                                   const GenerationParams& params, const std::string& prompt_template) {
  if (k < 1) fail(ErrorCode::invalid_argument, "k must be >= 1");
  const std::string prompt = render_template(prompt_template.empty() ? prompts::kQueryVariations : prompt_template,
                                             {{"backstory", topic.backstory}, {"count", std::to_string(k)}});
  auto items = parse_list_response(generator.generate(prompt, params));
  if (items.size() < static_cast<std::size_t>(k)) {
    GenerationParams retry = params;
    retry.seed = params.seed + 1;
    items = parse_list_response(generator.generate(prompt, retry));
  }
  if (items.size() < static_cast<std::size_t>(k)) {
    fail(ErrorCode::malformed_response, "topic " + topic.id + ": " + std::to_string(items.size()) +
                                            " parseable queries after retry, need " + std::to_string(k));
  }
  const AgentId origin = query_origin(AgentKind::llm, generator.tag(), "k=" + std::to_string(k));
  std::vector<Query> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) out.push_back(make_query(topic, origin, i, items[i]));
  return out;
}

std::vector<Query> generate_queries(const Topic& topic, const QueryAgentSpec& spec,
                                    const QueryAgentResources& resources) {
  spec.validate();
  auto need_providers = [&]() -> const ProviderRegistry& {
    if (resources.providers == nullptr) fail(ErrorCode::config_error, "query agent " + spec.name + " needs providers");
    return *resources.providers;
  };
  switch (spec.kind) {
    case QueryAgentKind::human_file:
      return load_human_variations(spec.path, topic.id, spec.k);
    case QueryAgentKind::lexical: {
      if (resources.stats != nullptr) return lexical_query_agent(topic, *resources.stats, spec.k, spec.name);
      std::vector<std::vector<std::string>> sentences;
      for (const auto& s : split_sentences(topic.backstory)) sentences.push_back(tokenize(s));
      if (sentences.empty()) fail(ErrorCode::no_candidates, "topic " + topic.id + " has an empty backstory");
      return lexical_query_agent(topic, compute_term_stats(sentences), spec.k, spec.name);
    }
    case QueryAgentKind::semantic: {
      const auto& p = need_providers();
      return semantic_query_agent(topic, p.generator(spec.generator), p.embedder(spec.embedder), spec.pool_size, spec.k,
                                  spec.generation, spec.prompt_template);
    }
    case QueryAgentKind::llm:
      return llm_query_agent(topic, need_providers().generator(spec.generator), spec.k, spec.generation,
                             spec.prompt_template);
  }
  fail(ErrorCode::config_error, "unhandled query agent kind");
}

}  // namespace arena
