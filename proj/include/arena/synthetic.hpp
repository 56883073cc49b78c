// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "arena/dataset.hpp"
#include "arena/providers.hpp"

namespace arena {

/// Shape of a generated competition dataset. Each topic has a backstory,
/// human queries, and per round `human_docs` human and `llm_docs` LLM
/// documents, graded 0..2 at topic level. In a share of the (topic, round)
/// units from round 2 on, one LLM document is a decoy: stuffed with the
/// topic's terms but graded below the best human document, so that rankers
/// lose about `mixed_gap_points` nDCG@1 points (x100) on the mixed corpus.
struct SyntheticSpec {
  int topics = 10;
  int rounds = 10;
  int human_docs = 3;
  int llm_docs = 2;
  int queries_per_topic = 3;
  double mixed_gap_points = 5.0;
  std::uint64_t seed = 1;
  /// Multiplies the human key-term rates (0.22, 0.10, 0.03 by grade).
  double human_key_scale = 1.0;
  /// Per-slot key and related term rates of LLM documents.
  double llm_key_rate = 0.04;
  double llm_related_rate = 0.15;
  /// When set, related terms are the pool words nearest to the topic's key
  /// terms under this embedder, so embedding rankers see synonyms that exact
  /// term matching misses. Empty draws them at random.
  std::string related_embedder;

  void validate() const;
};

/// `related` must be given when spec.related_embedder is set.
Dataset make_synthetic_dataset(const SyntheticSpec& spec, const Embedder* related = nullptr);

/// Human query variations of a dataset in the {topic_id, query_text,
/// frequency} line format, most frequent first per topic.
std::string human_variations_jsonl(const Dataset& data);

}  // namespace arena
