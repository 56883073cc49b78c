// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/core.hpp"

namespace arena {

inline constexpr const char* kDatasetFormat = "arena-jsonl/1";

// arena-jsonl/1: one JSON object per line with a "type" of
//   topic     {id, backstory}
//   query     {id, topic_id, text, origin?}
//   document  {id, topic_id, author | author_kind, text, round?}
//   judgment  {query_id, doc_id, grade}
// "author" is an object {kind, model_tag, params_digest}; "author_kind" is a
// bare kind name. A judgment whose query_id is a topic id applies to every
// query of that topic.

struct Dataset {
  std::vector<Topic> topics;
  std::vector<Query> queries;
  std::vector<Document> documents;

  const Topic* find_topic(std::string_view id) const;
  std::vector<Query> queries_of(std::string_view topic_id) const;
  /// Documents of a topic in file order; round < 0 selects every round.
  std::vector<Document> documents_of(std::string_view topic_id, int round = -1) const;
  /// Largest round_created of the topic's documents, 0 if it has none.
  int last_round(std::string_view topic_id) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct RejectedRecord {
  std::size_t line = 0;  // 1-based
  std::string reason;
  std::string raw;
};

struct IngestResult {
  Dataset data;
  std::vector<RejectedRecord> rejects;
};

/// Parses and validates records; invalid records are collected as rejects.
/// Throws ArenaError(config_error) for an unknown format tag and
/// ArenaError(malformed_file) when the file cannot be read.
IngestResult ingest_dataset_text(std::string_view text, std::string_view format = kDatasetFormat,
                                 int max_terms = kDefaultMaxTerms);
IngestResult ingest_dataset(const std::filesystem::path& path, std::string_view format = kDatasetFormat,
                            int max_terms = kDefaultMaxTerms);

std::string dataset_to_string(const Dataset& data);
void export_dataset(const std::filesystem::path& path, const Dataset& data);

/// Rejects as JSON lines {line, reason, raw}.
void write_rejects(const std::filesystem::path& path, std::span<const RejectedRecord> rejects);

struct Judgment {
  std::string query_id;
  std::string doc_id;
  int grade = 0;
};

/// Judgments file: one {query_id, doc_id, grade} object per line. Throws
/// ArenaError(malformed_file) on any bad line.
std::vector<Judgment> load_judgments(const std::filesystem::path& path);

/// Files judgments under their topic (found through the query, or the
/// query_id naming a topic). Throws ArenaError(missing_topic).
void apply_judgments(Dataset& data, std::span<const Judgment> judgments);

}  // namespace arena
