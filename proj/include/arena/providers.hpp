// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

/// Unit L2 norm, or all zeros for text without tokens.
struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

struct GenerationParams {
  double temperature = 0.7;
  double top_p = 0.95;
  int max_tokens = 512;
  std::uint64_t seed = 0;

  /// Throws ArenaError(invalid_argument) when out of range.
  void validate() const;
};

// The four model capabilities. Implementations must tolerate concurrent calls.

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;
  virtual std::string tag() const = 0;

  EmbeddingVector embed_one(const std::string& text) const;
};

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string generate(const std::string& prompt, const GenerationParams& params) const = 0;
  virtual std::string tag() const = 0;
};

class RelevanceModel {
 public:
  virtual ~RelevanceModel() = default;
  /// In [0, 1]; higher means more relevant.
  virtual double relevance_score(const std::string& query, const std::string& doc) const = 0;
  virtual std::string tag() const = 0;
};

class EntailmentModel {
 public:
  virtual ~EntailmentModel() = default;
  /// Probability-like score in [0, 1] that `premise` entails `hypothesis`.
  virtual double entailment_prob(const std::string& premise, const std::string& hypothesis) const = 0;
  virtual std::string tag() const = 0;
};

// ---------------------------------------------------------------------------
// Deterministic local implementations. Pure functions of (inputs, seed).

/// Each token adds a seeded pseudo-random +/-1 pattern over `dim` components;
/// the sum is L2-normalized. Bag-of-words: token order does not matter.
/// Requires dim >= 8.
EmbeddingVector local_hashed_embed(std::string_view text, int dim, std::uint64_t seed);

class HashedEmbedder final : public Embedder {
 public:
  HashedEmbedder(std::string tag, int dim, std::uint64_t seed);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
  std::string tag() const override { return tag_; }
  int dim() const { return dim_; }

 private:
  std::string tag_;
  int dim_;
  std::uint64_t seed_;
};

/// Prompt-driven template generator. Recognizes the tagged blocks written by
/// the default prompts (<backstory>, <query>, <document>, <competitors>,
/// <count>) and answers
///   - list prompts ("plain list") with <count> numbered lines of words
///     sampled from the backstory (or the whole prompt);
///   - document prompts with the document, one sentence swapped for a
///     sentence built from query terms and competitor words;
///   - anything else with a short word sample.
/// Output depends only on (prompt, params.seed, construction seed).
class TemplateGenerator final : public TextGenerator {
 public:
  TemplateGenerator(std::string tag, std::uint64_t seed);

  std::string generate(const std::string& prompt, const GenerationParams& params) const override;
  std::string tag() const override { return tag_; }

 private:
  std::string tag_;
  std::uint64_t seed_;
};

/// |distinct query terms present in doc| / |distinct query terms|.
class OverlapRelevance final : public RelevanceModel {
 public:
  explicit OverlapRelevance(std::string tag = "stub-relevance") : tag_(std::move(tag)) {}
  double relevance_score(const std::string& query, const std::string& doc) const override;
  std::string tag() const override { return tag_; }

 private:
  std::string tag_;
};

/// Fraction of hypothesis tokens that occur in the premise.
class OverlapEntailment final : public EntailmentModel {
 public:
  explicit OverlapEntailment(std::string tag = "stub-nli") : tag_(std::move(tag)) {}
  double entailment_prob(const std::string& premise, const std::string& hypothesis) const override;
  std::string tag() const override { return tag_; }

 private:
  std::string tag_;
};

/// Tag -> provider lookup shared by rankers and agents.
class ProviderRegistry {
 public:
  void add(std::shared_ptr<const Embedder> p);
  void add(std::shared_ptr<const TextGenerator> p);
  void add(std::shared_ptr<const RelevanceModel> p);
  void add(std::shared_ptr<const EntailmentModel> p);

  // Throw ArenaError(config_error) for unknown tags.
  const Embedder& embedder(const std::string& tag) const;
  const TextGenerator& generator(const std::string& tag) const;
  const RelevanceModel& relevance(const std::string& tag) const;
  const EntailmentModel& entailment(const std::string& tag) const;

  bool has_embedder(const std::string& tag) const { return embedders_.contains(tag); }
  bool has_generator(const std::string& tag) const { return generators_.contains(tag); }

  /// Local stand-ins: embedders "stub-e5" and "stub-contriever" (dim 256),
  /// generators "stub-llama" and "stub-gemma", relevance models of the same
  /// names, entailment "stub-nli".
  static ProviderRegistry local_stubs(std::uint64_t seed = 0);

 private:
  std::map<std::string, std::shared_ptr<const Embedder>> embedders_;
  std::map<std::string, std::shared_ptr<const TextGenerator>> generators_;
  std::map<std::string, std::shared_ptr<const RelevanceModel>> relevance_;
  std::map<std::string, std::shared_ptr<const EntailmentModel>> entailment_;
};

}  // namespace arena
