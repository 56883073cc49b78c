// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/doc_agents.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>

#include "arena/error.hpp"
#include "arena/prompts.hpp"

namespace arena {
namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> tenths(int last) {
  std::vector<double> v;
  for (int i = 0; i <= last; ++i) v.push_back(i / 10.0);
  return v;
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

const Document& find_doc(std::span<const Document> docs, const std::string& id) {
  for (const auto& d : docs) {
    if (d.id == id) return d;
  }
  fail(ErrorCode::invalid_argument, "ranked document " + id + " not among the current documents");
}

}  // namespace

void LexicalAgentParams::validate() const {
  if (!in_unit(lambda)) fail(ErrorCode::config_error, "lexical agent: lambda must be in [0, 1]");
  if (m < 2 || m > 4) fail(ErrorCode::config_error, "lexical agent: m must be 2, 3 or 4");
  if (!(eta >= 0.0 && eta <= 0.5)) fail(ErrorCode::config_error, "lexical agent: eta must be in [0, 0.5]");
}

std::string LexicalAgentParams::digest() const {
  return "lambda=" + fmt_num(lambda) + ";m=" + std::to_string(m) + ";eta=" + fmt_num(eta);
}

std::vector<LexicalAgentParams> LexicalAgentParams::grid() {
  std::vector<LexicalAgentParams> out;
  for (double l : tenths(10)) {
    for (int m : {2, 3, 4}) {
      for (double e : tenths(5)) out.push_back({l, m, e});
    }
  }
  return out;
}

std::string_view to_string(CandidateStrategy s) {
  switch (s) {
    case CandidateStrategy::all: return "all";
    case CandidateStrategy::better: return "better";
    case CandidateStrategy::best: return "best";
  }
  return "all";
}

CandidateStrategy parse_candidate_strategy(std::string_view name) {
  if (name == "all" || name == "All") return CandidateStrategy::all;
  if (name == "better" || name == "Better") return CandidateStrategy::better;
  if (name == "best" || name == "Best") return CandidateStrategy::best;
  fail(ErrorCode::config_error, "unknown candidate strategy '" + std::string(name) + "'");
}

void SemanticAgentParams::validate() const {
  if (!in_unit(lambda)) fail(ErrorCode::config_error, "semantic agent: lambda must be in [0, 1]");
  if (!(eta >= 0.0 && eta <= 0.5)) fail(ErrorCode::config_error, "semantic agent: eta must be in [0, 0.5]");
  if (embedder.empty() || nli.empty()) fail(ErrorCode::config_error, "semantic agent needs embedder and nli tags");
}

std::string SemanticAgentParams::digest() const {
  return "strategy=" + std::string(to_string(strategy)) + ";lambda=" + fmt_num(lambda) + ";eta=" + fmt_num(eta) +
         ";nli=" + nli + (source_query_affinity ? ";src_q" : "");
}

std::vector<SemanticAgentParams> SemanticAgentParams::grid(const std::string& embedder, const std::string& nli) {
  std::vector<SemanticAgentParams> out;
  for (auto s : {CandidateStrategy::all, CandidateStrategy::better, CandidateStrategy::best}) {
    for (double l : tenths(10)) {
      for (double e : tenths(5)) out.push_back({s, l, e, embedder, nli, false});
    }
  }
  return out;
}

std::string_view to_string(PromptStrategy s) { return s == PromptStrategy::pair ? "pair" : "all"; }

PromptStrategy parse_prompt_strategy(std::string_view name) {
  if (name == "pair" || name == "F_pair") return PromptStrategy::pair;
  if (name == "all" || name == "F_all") return PromptStrategy::all;
  fail(ErrorCode::config_error, "unknown prompt strategy '" + std::string(name) + "'");
}

void LlmAgentParams::validate() const {
  if (generator.empty()) fail(ErrorCode::config_error, "llm agent needs a generator tag");
  generation.validate();
}

std::string LlmAgentParams::digest() const {
  return "strategy=" + std::string(to_string(strategy)) + ";no_copy=" + (no_copy ? "1" : "0") +
         ";temperature=" + fmt_num(generation.temperature) + ";top_p=" + fmt_num(generation.top_p);
}

std::vector<LlmAgentParams> LlmAgentParams::grid(const std::string& generator) {
  std::vector<LlmAgentParams> out;
  for (auto s : {PromptStrategy::pair, PromptStrategy::all}) {
    for (bool nc : {false, true}) {
      LlmAgentParams p;
      p.strategy = s;
      p.no_copy = nc;
      p.generator = generator;
      out.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double qt_feature(std::span<const std::string> sentence_tokens, std::span<const std::string> query_tokens) {
  if (sentence_tokens.empty()) fail(ErrorCode::empty_sentence, "QT of a sentence without tokens");
  std::size_t hits = 0;
  for (const auto& t : sentence_tokens) {
    if (std::find(query_tokens.begin(), query_tokens.end(), t) != query_tokens.end()) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sentence_tokens.size());
}

SparseVector top_m_centroid(const RankedList& ranking, std::span<const Document> docs, int m, const TermStats& stats) {
  if (m < 1 || ranking.size() < static_cast<std::size_t>(m)) {
    fail(ErrorCode::insufficient_ranking, "ranking has " + std::to_string(ranking.size()) + " entries, need m=" +
                                              std::to_string(m));
  }
  std::vector<SparseVector> vectors;
  for (int i = 0; i < m; ++i) {
    const auto& d = find_doc(docs, ranking.entries[static_cast<std::size_t>(i)].doc_id);
    vectors.push_back(tfidf_vector(tokenize(d.text), stats));
  }
  return centroid(vectors);
}

double st_feature(std::string_view sentence, const RankedList& ranking, std::span<const Document> docs, int m,
                  const TermStats& stats) {
  const SparseVector c = top_m_centroid(ranking, docs, m, stats);
  return cosine(tfidf_vector(tokenize(sentence), stats), c);
}

std::vector<CandidateSentence> semantic_candidates(const Document& doc, const RankedList& ranking,
                                                   std::span<const Document> docs, CandidateStrategy strategy) {
  const auto own_rank = ranking.rank_of(doc.id);
  if (!own_rank) fail(ErrorCode::invalid_argument, "document " + doc.id + " is not in the ranking");
  std::size_t limit = ranking.size();
  if (strategy == CandidateStrategy::better) limit = static_cast<std::size_t>(*own_rank - 1);
  if (strategy == CandidateStrategy::best) limit = *own_rank == 1 ? 0 : 1;

  std::vector<CandidateSentence> out;
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& id = ranking.entries[i].doc_id;
    if (id == doc.id) continue;
    for (auto& s : split_sentences(find_doc(docs, id).text)) out.push_back({std::move(s), id});
  }
  return out;
}

std::vector<CandidateSentence> competitor_sentences(const Document& doc, const RankedList& ranking,
                                                    std::span<const Document> docs) {
  return semantic_candidates(doc, ranking, docs, CandidateStrategy::all);
}

PairTable lexical_pair_table(const Document& doc, const Query& query, const RankedList& ranking,
                             std::span<const Document> docs, const LexicalAgentParams& params, const TermStats& stats,
                             Execution exec) {
  params.validate();
  PairTable table;
  table.sources = split_sentences(doc.text);
  table.targets = competitor_sentences(doc, ranking, docs);
  const SparseVector top = top_m_centroid(ranking, docs, params.m, stats);
  const auto q = tokenize(query.text);

  struct Features {
    bool has_tokens = false;
    SparseVector tfidf;
    double qt = 0.0;
    double st = 0.0;
  };
  auto features = [&](const std::string& text) {
    Features f;
    const auto toks = tokenize(text);
    if (toks.empty()) return f;
    f.has_tokens = true;
    f.tfidf = tfidf_vector(toks, stats);
    f.qt = qt_feature(toks, q);
    f.st = cosine(f.tfidf, top);
    return f;
  };
  const std::size_t ns = table.sources.size();
  const std::size_t nt = table.targets.size();
  std::vector<Features> src(ns), tgt(nt);
  for_each_index(ns, exec, [&](std::size_t i) { src[i] = features(table.sources[i]); });
  for_each_index(nt, exec, [&](std::size_t j) { tgt[j] = features(table.targets[j].text); });

  table.pairs.resize(ns * nt);
  for_each_index(ns * nt, exec, [&](std::size_t k) {
    const std::size_t i = k / nt;
    const std::size_t j = k % nt;
    PairScore& p = table.pairs[k];
    p.source = static_cast<int>(i);
    p.target = j;
    if (!src[i].has_tokens || !tgt[j].has_tokens) return;
    p.admitted = cosine(src[i].tfidf, tgt[j].tfidf) > params.eta;
    p.score = params.lambda * (tgt[j].qt - src[i].qt) + (1.0 - params.lambda) * (tgt[j].st - src[i].st);
  });
  return table;
}

PairTable semantic_pair_table(const Document& doc, const Query& query, const RankedList& ranking,
                              std::span<const Document> docs, const SemanticAgentParams& params,
                              const Embedder& embedder, const EntailmentModel& nli, Execution exec) {
  params.validate();
  PairTable table;
  table.sources = split_sentences(doc.text);
  table.targets = semantic_candidates(doc, ranking, docs, params.strategy);
  const std::size_t ns = table.sources.size();
  const std::size_t nt = table.targets.size();
  if (ns == 0 || nt == 0) return table;

  std::vector<std::string> texts;
  texts.reserve(1 + ns + nt);
  texts.push_back(query.text);
  texts.insert(texts.end(), table.sources.begin(), table.sources.end());
  for (const auto& t : table.targets) texts.push_back(t.text);
  const auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size()) fail(ErrorCode::malformed_response, "embedder returned the wrong number of vectors");
  auto vec = [&](std::size_t idx) { return std::span<const double>(vectors[idx].values); };

  table.pairs.resize(ns * nt);
  for_each_index(ns * nt, exec, [&](std::size_t k) {
    const std::size_t i = k / nt;
    const std::size_t j = k % nt;
    PairScore& p = table.pairs[k];
    p.source = static_cast<int>(i);
    p.target = j;
    p.admitted = nli.entailment_prob(table.targets[j].text, table.sources[i]) > params.eta;
    const double fit = cosine(vec(1 + i), vec(1 + ns + j));
    const double affinity = params.source_query_affinity ? cosine(vec(1 + i), vec(0)) : cosine(vec(1 + ns + j), vec(0));
    p.score = params.lambda * fit + (1.0 - params.lambda) * affinity;
  });
  return table;
}

std::optional<ModificationProposal> select_proposal(const Document& doc, const PairTable& table, int max_terms) {
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < table.pairs.size(); ++k) {
    if (table.pairs[k].admitted) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const PairScore& x = table.pairs[a];
    const PairScore& y = table.pairs[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.source != y.source) return x.source < y.source;
    const auto& tx = table.targets[x.target];
    const auto& ty = table.targets[y.target];
    if (tx.text != ty.text) return tx.text < ty.text;
    return tx.provenance < ty.provenance;
  });
  for (std::size_t k : order) {
    const PairScore& p = table.pairs[k];
    ModificationProposal proposal{p.source, table.targets[p.target].text, p.score, table.targets[p.target].provenance};
    try {
      apply_proposal(doc, proposal, max_terms);
      return proposal;
    } catch (const ArenaError& e) {
      if (e.code() != ErrorCode::term_limit_exceeded) throw;
    }
  }
  return std::nullopt;
}

std::optional<ModificationProposal> lexical_propose(const Document& doc, const Query& query, const RankedList& ranking,
                                                    std::span<const Document> docs, const LexicalAgentParams& params,
                                                    const TermStats& stats, int max_terms, Execution exec) {
  return select_proposal(doc, lexical_pair_table(doc, query, ranking, docs, params, stats, exec), max_terms);
}

std::optional<ModificationProposal> semantic_propose(const Document& doc, const Query& query,
                                                     const RankedList& ranking, std::span<const Document> docs,
                                                     const SemanticAgentParams& params, const Embedder& embedder,
                                                     const EntailmentModel& nli, int max_terms, Execution exec) {
  return select_proposal(doc, semantic_pair_table(doc, query, ranking, docs, params, embedder, nli, exec), max_terms);
}

Document apply_proposal(const Document& doc, const ModificationProposal& proposal, int max_terms) {
  const auto spans = sentence_spans(doc.text);
  if (proposal.source_sentence_index < 0 || static_cast<std::size_t>(proposal.source_sentence_index) >= spans.size()) {
    fail(ErrorCode::invalid_argument, "source sentence index " + std::to_string(proposal.source_sentence_index) +
                                          " out of range for document " + doc.id);
  }
  if (proposal.target_sentence.empty()) fail(ErrorCode::invalid_argument, "empty target sentence");
  const auto& s = spans[static_cast<std::size_t>(proposal.source_sentence_index)];
  Document out = doc;
  out.text = doc.text.substr(0, s.begin) + proposal.target_sentence + doc.text.substr(s.end);
  const std::size_t terms = count_terms(out.text);
  if (static_cast<long long>(terms) > max_terms) {
    fail(ErrorCode::term_limit_exceeded, "replacement gives " + std::to_string(terms) + " terms, limit " +
                                             std::to_string(max_terms));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string build_rewrite_prompt(const Document& doc, const Query& query, std::span<const RankedSnapshot> history,
                                 const RankedSnapshot& current, const LlmAgentParams& params, Rng& rng) {
  auto text_of = [&](const std::string& id) -> const std::string& {
    auto it = current.texts.find(id);
    if (it == current.texts.end()) fail(ErrorCode::invalid_argument, "no text for ranked document " + id);
    return it->second;
  };
  const std::size_t n = current.ranking.size();
  std::string block;
  for (const auto& snap : history) {
    if (auto r = snap.ranking.rank_of(doc.id)) {
      block += "Round " + std::to_string(snap.round) + ": your document was ranked " + std::to_string(*r) + " of " +
               std::to_string(snap.ranking.size()) + ".\n";
    }
  }
  if (params.strategy == PromptStrategy::all) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = current.ranking.entries[i];
      block += "Rank " + std::to_string(i + 1) + (e.doc_id == doc.id ? " (your document)" : "") + ": " +
               text_of(e.doc_id) + "\n";
    }
  } else {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i) {
      if (current.ranking.entries[i].doc_id != doc.id) others.push_back(i);
    }
    auto picks = rng.sample_indices(others.size(), 2);
    std::sort(picks.begin(), picks.end());
    for (std::size_t p : picks) {
      const std::size_t i = others[p];
      block += "Rank " + std::to_string(i + 1) + ": " + text_of(current.ranking.entries[i].doc_id) + "\n";
    }
  }
  const auto own_rank = current.ranking.rank_of(doc.id);
  if (own_rank) block += "Your document is currently ranked " + std::to_string(*own_rank) + " of " + std::to_string(n) + ".\n";

  const std::string max_terms = std::to_string(kDefaultMaxTerms);
  return render_template(params.prompt_template.empty() ? prompts::kDocumentRewrite : params.prompt_template,
                         {{"query", query.text},
                          {"document", doc.text},
                          {"competitors", block},
                          {"rules", render_template(prompts::kRules, {{"max_terms", max_terms}})},
                          {"no_copy_clause", params.no_copy ? prompts::kNoCopyClause : ""}});
}

std::string truncate_to_terms(std::string_view text, int max_terms) {
  int counted = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    if (!tokenize(text.substr(start, i - start)).empty()) {
      if (++counted == max_terms) return std::string(text.substr(0, i));
    }
  }
  return std::string(text);
}

namespace {

std::string clean_generation(std::string text) {
  for (char& c : text) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x20 && c != '\n' && c != '\t') c = ' ';
  }
  auto b = text.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  auto e = text.find_last_not_of(" \t\n");
  return text.substr(b, e - b + 1);
}

}  // namespace

std::string llm_propose(const Document& doc, const Query& query, std::span<const RankedSnapshot> history,
                        const RankedSnapshot& current, const LlmAgentParams& params, const TextGenerator& generator,
                        Rng& rng, int max_terms) {
  params.validate();
  const std::string prompt = build_rewrite_prompt(doc, query, history, current, params, rng);
  GenerationParams gen = params.generation;
  gen.seed = rng.next();
  std::string out = clean_generation(generator.generate(prompt, gen));
  if (static_cast<long long>(count_terms(out)) > max_terms) {
    const std::string stricter =
        prompt + "\n" + render_template(prompts::kStricterLength, {{"max_terms", std::to_string(max_terms)}});
    out = clean_generation(generator.generate(stricter, gen));
    if (static_cast<long long>(count_terms(out)) > max_terms) out = truncate_to_terms(out, max_terms);
  }
  if (count_terms(out) == 0) return doc.text;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class StaticAgent final : public DocumentAgent {
 public:
  explicit StaticAgent(AgentId id) : id_(std::move(id)) {}
  const AgentId& id() const override { return id_; }
  AgentAction act(const AgentView& view, Rng&) const override { return {static_propose(view.own), std::nullopt}; }

 private:
  AgentId id_;
};

AgentAction apply_or_keep(const Document& own, std::optional<ModificationProposal> proposal, int max_terms) {
  if (!proposal) return {own.text, std::nullopt};
  return {apply_proposal(own, *proposal, max_terms).text, std::move(proposal)};
}

class LexicalAgent final : public DocumentAgent {
 public:
  LexicalAgent(AgentId id, LexicalAgentParams params) : id_(std::move(id)), params_(params) {}
  const AgentId& id() const override { return id_; }
  AgentAction act(const AgentView& v, Rng&) const override {
    return apply_or_keep(
        v.own, lexical_propose(v.own, v.query, v.ranking, v.documents, params_, v.stats, v.max_terms, v.exec),
        v.max_terms);
  }

 private:
  AgentId id_;
  LexicalAgentParams params_;
};

class SemanticAgent final : public DocumentAgent {
 public:
  SemanticAgent(AgentId id, SemanticAgentParams params) : id_(std::move(id)), params_(std::move(params)) {}
  const AgentId& id() const override { return id_; }
  AgentAction act(const AgentView& v, Rng&) const override {
    if (v.providers == nullptr) fail(ErrorCode::config_error, "semantic agent without providers");
    return apply_or_keep(v.own,
                         semantic_propose(v.own, v.query, v.ranking, v.documents, params_,
                                          v.providers->embedder(params_.embedder),
                                          v.providers->entailment(params_.nli), v.max_terms, v.exec),
                         v.max_terms);
  }

 private:
  AgentId id_;
  SemanticAgentParams params_;
};

class LlmAgent final : public DocumentAgent {
 public:
  LlmAgent(AgentId id, LlmAgentParams params) : id_(std::move(id)), params_(std::move(params)) {}
  const AgentId& id() const override { return id_; }
  AgentAction act(const AgentView& v, Rng& rng) const override {
    if (v.providers == nullptr) fail(ErrorCode::config_error, "llm agent without providers");
    RankedSnapshot current{v.ranking.round, v.ranking, {}};
    for (const auto& d : v.documents) current.texts.emplace(d.id, d.text);
    return {llm_propose(v.own, v.query, v.history, current, params_, v.providers->generator(params_.generator), rng,
                        v.max_terms),
            std::nullopt};
  }

 private:
  AgentId id_;
  LlmAgentParams params_;
};

}  // namespace

AgentId DocumentAgentSpec::id() const {
  switch (kind) {
    case AgentKind::lexical:
      return {kind, "lexical", std::get<LexicalAgentParams>(params).digest()};
    case AgentKind::semantic: {
      const auto& p = std::get<SemanticAgentParams>(params);
      return {kind, p.embedder, p.digest()};
    }
    case AgentKind::llm: {
      const auto& p = std::get<LlmAgentParams>(params);
      return {kind, p.generator, p.digest()};
    }
    case AgentKind::static_agent:
      return {kind, "static", ""};
    case AgentKind::human:
      break;
  }
  return {kind, name, ""};
}

void DocumentAgentSpec::validate() const {
  auto need = [&](bool ok) {
    if (!ok) fail(ErrorCode::config_error, "document agent " + name + ": parameters do not match kind");
  };
  switch (kind) {
    case AgentKind::lexical:
      need(std::holds_alternative<LexicalAgentParams>(params));
      std::get<LexicalAgentParams>(params).validate();
      break;
    case AgentKind::semantic:
      need(std::holds_alternative<SemanticAgentParams>(params));
      std::get<SemanticAgentParams>(params).validate();
      break;
    case AgentKind::llm:
      need(std::holds_alternative<LlmAgentParams>(params));
      std::get<LlmAgentParams>(params).validate();
      break;
    case AgentKind::static_agent:
      break;
    case AgentKind::human:
      fail(ErrorCode::config_error, "document agent " + name + ": human documents cannot be simulated");
  }
}

std::unique_ptr<DocumentAgent> make_document_agent(const DocumentAgentSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case AgentKind::lexical:
      return std::make_unique<LexicalAgent>(spec.id(), std::get<LexicalAgentParams>(spec.params));
    case AgentKind::semantic:
      return std::make_unique<SemanticAgent>(spec.id(), std::get<SemanticAgentParams>(spec.params));
    case AgentKind::llm:
      return std::make_unique<LlmAgent>(spec.id(), std::get<LlmAgentParams>(spec.params));
    default:
      return std::make_unique<StaticAgent>(spec.id());
  }
}

}  // namespace arena
