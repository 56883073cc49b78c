// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/providers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>

#include "arena/error.hpp"
#include "arena/parallel.hpp"
#include "arena/rng.hpp"
#include "arena/textproc.hpp"

namespace arena {

void GenerationParams::validate() const {
  if (!(temperature >= 0.0)) fail(ErrorCode::invalid_argument, "temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) fail(ErrorCode::invalid_argument, "top_p must be in (0, 1]");
  if (max_tokens < 1) fail(ErrorCode::invalid_argument, "max_tokens must be >= 1");
}

EmbeddingVector Embedder::embed_one(const std::string& text) const {
  auto v = embed(std::span<const std::string>(&text, 1));
  if (v.size() != 1) fail(ErrorCode::malformed_response, "embedder returned " + std::to_string(v.size()) + " vectors for 1 text");
  return std::move(v.front());
}

EmbeddingVector local_hashed_embed(std::string_view text, int dim, std::uint64_t seed) {
  if (dim < 8) fail(ErrorCode::invalid_argument, "embedding dim must be >= 8");
  std::vector<double> sum(static_cast<std::size_t>(dim), 0.0);
  const auto tokens = tokenize(text);
  for (const auto& tok : tokens) {
    const std::uint64_t h = splitmix64(fnv1a64(tok) ^ splitmix64(seed));
    for (int j = 0; j < dim; ++j) {
      const std::uint64_t bits = splitmix64(h + static_cast<std::uint64_t>(j) * 0x9e3779b97f4a7c15ULL);
      sum[static_cast<std::size_t>(j)] += (bits >> 63) ? 1.0 : -1.0;
    }
  }
  double norm = 0.0;
  for (double x : sum) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : sum) x /= norm;
  }
  return EmbeddingVector{std::move(sum)};
}

HashedEmbedder::HashedEmbedder(std::string tag, int dim, std::uint64_t seed)
    : tag_(std::move(tag)), dim_(dim), seed_(seed) {
  if (dim < 8) fail(ErrorCode::invalid_argument, "embedding dim must be >= 8");
}

std::vector<EmbeddingVector> HashedEmbedder::embed(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out(texts.size());
  const Execution exec = texts.size() >= 16 ? Execution::parallel : Execution::serial;
  for_each_index(texts.size(), exec, [&](std::size_t i) { out[i] = local_hashed_embed(texts[i], dim_, seed_); });
  return out;
}

namespace {

std::optional<std::string> tagged_block(std::string_view prompt, std::string_view name) {
  const std::string open = "<" + std::string(name) + ">";
  const std::string close = "</" + std::string(name) + ">";
  auto b = prompt.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  b += open.size();
  auto e = prompt.find(close, b);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(prompt.substr(b, e - b));
}

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> out;
  const auto& stop = default_stopwords();
  for (auto& t : tokenize(text)) {
    if (stop.contains(t) || t == "rank") continue;
    if (std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) continue;
    out.push_back(std::move(t));
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string sample_phrase(Rng& rng, const std::vector<std::string>& vocab, std::size_t len) {
  std::string out;
  std::string last;
  for (std::size_t i = 0; i < len; ++i) {
    const std::string& w = vocab[rng.below(vocab.size())];
    if (w == last) continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
    last = w;
  }
  return out;
}

std::string generate_list(const std::string& prompt, Rng& rng) {
  std::vector<std::string> vocab;
  if (auto b = tagged_block(prompt, "backstory")) vocab = content_words(*b);
  if (vocab.empty()) vocab = content_words(prompt);
  if (vocab.empty()) vocab = {"information"};
  int count = 10;
  if (auto c = tagged_block(prompt, "count")) {
    try {
      count = std::max(1, std::stoi(*c));
    } catch (const std::exception&) {
    }
  }
  std::string out;
  for (int i = 1; i <= count; ++i) {
    out += std::to_string(i) + ". " + sample_phrase(rng, vocab, 2 + rng.below(3)) + "\n";
  }
  return out;
}

std::string generate_rewrite(const std::string& prompt, const std::string& document, Rng& rng) {
  const auto query = tokenize(tagged_block(prompt, "query").value_or(""));
  const bool no_copy = lowercase(prompt).find("do not copy") != std::string::npos;
  std::vector<std::string> vocab;
  if (!no_copy) {
    if (auto c = tagged_block(prompt, "competitors")) vocab = content_words(*c);
  }
  if (vocab.empty()) vocab = content_words(document);
  if (vocab.empty()) vocab = {"information"};

  std::string sentence;
  for (const auto& q : query) sentence += (sentence.empty() ? "" : " ") + q;
  std::string filler = sample_phrase(rng, vocab, 3 + rng.below(4));
  if (!filler.empty()) sentence += (sentence.empty() ? "" : " ") + filler;
  if (!sentence.empty()) sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
  sentence += ".";

  const auto spans = sentence_spans(document);
  if (spans.empty()) return sentence;
  const auto& s = spans[rng.below(spans.size())];
  return document.substr(0, s.begin) + sentence + document.substr(s.end);
}

}  // namespace

TemplateGenerator::TemplateGenerator(std::string tag, std::uint64_t seed) : tag_(std::move(tag)), seed_(seed) {}

std::string TemplateGenerator::generate(const std::string& prompt, const GenerationParams& params) const {
  params.validate();
  Rng rng(derive_seed(splitmix64(seed_) ^ params.seed, prompt));
  if (lowercase(prompt).find("plain list") != std::string::npos) return generate_list(prompt, rng);
  if (auto doc = tagged_block(prompt, "document")) return generate_rewrite(prompt, *doc, rng);
  auto vocab = content_words(prompt);
  if (vocab.empty()) vocab = {"information"};
  return sample_phrase(rng, vocab, 10);
}

double OverlapRelevance::relevance_score(const std::string& query, const std::string& doc) const {
  const auto q = tokenize(query);
  const std::set<std::string> qset(q.begin(), q.end());
  if (qset.empty()) return 0.0;
  const auto d = tokenize(doc);
  const std::set<std::string> dset(d.begin(), d.end());
  std::size_t hit = 0;
  for (const auto& t : qset) hit += dset.contains(t) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(qset.size());
}

double OverlapEntailment::entailment_prob(const std::string& premise, const std::string& hypothesis) const {
  const auto h = tokenize(hypothesis);
  if (h.empty()) return 0.0;
  const auto p = tokenize(premise);
  const std::set<std::string> pset(p.begin(), p.end());
  std::size_t hit = 0;
  for (const auto& t : h) hit += pset.contains(t) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(h.size());
}

void ProviderRegistry::add(std::shared_ptr<const Embedder> p) { embedders_[p->tag()] = std::move(p); }
void ProviderRegistry::add(std::shared_ptr<const TextGenerator> p) { generators_[p->tag()] = std::move(p); }
void ProviderRegistry::add(std::shared_ptr<const RelevanceModel> p) { relevance_[p->tag()] = std::move(p); }
void ProviderRegistry::add(std::shared_ptr<const EntailmentModel> p) { entailment_[p->tag()] = std::move(p); }

namespace {
template <class Map>
const auto& lookup(const Map& m, const std::string& tag, const char* what) {
  auto it = m.find(tag);
  if (it == m.end()) fail(ErrorCode::config_error, std::string("no ") + what + " provider tagged '" + tag + "'");
  return *it->second;
}
}  // namespace

const Embedder& ProviderRegistry::embedder(const std::string& tag) const { return lookup(embedders_, tag, "embedding"); }
const TextGenerator& ProviderRegistry::generator(const std::string& tag) const {
  return lookup(generators_, tag, "generation");
}
const RelevanceModel& ProviderRegistry::relevance(const std::string& tag) const {
  return lookup(relevance_, tag, "relevance");
}
const EntailmentModel& ProviderRegistry::entailment(const std::string& tag) const {
  return lookup(entailment_, tag, "entailment");
}

ProviderRegistry ProviderRegistry::local_stubs(std::uint64_t seed) {
  ProviderRegistry r;
  r.add(std::make_shared<HashedEmbedder>("stub-e5", 256, derive_seed(seed, "stub-e5")));
  r.add(std::make_shared<HashedEmbedder>("stub-contriever", 256, derive_seed(seed, "stub-contriever")));
  r.add(std::make_shared<TemplateGenerator>("stub-llama", derive_seed(seed, "stub-llama")));
  r.add(std::make_shared<TemplateGenerator>("stub-gemma", derive_seed(seed, "stub-gemma")));
  r.add(std::make_shared<OverlapRelevance>("stub-llama"));
  r.add(std::make_shared<OverlapRelevance>("stub-gemma"));
  r.add(std::make_shared<OverlapEntailment>("stub-nli"));
  return r;
}

}  // namespace arena
