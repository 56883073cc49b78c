// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace arena {

/// Lowercased whitespace tokens with ASCII punctuation removed; tokens that
/// were punctuation only are dropped. No stemming, no stopping.
std::vector<std::string> tokenize(std::string_view text);

struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the terminator
};

/// Sentence boundaries: a run ending in '.', '!' or '?' that is followed by
/// whitespace or end of text. Spans are trimmed and never empty.
std::vector<SentenceSpan> sentence_spans(std::string_view text);

std::vector<std::string> split_sentences(std::string_view text);

/// Document-frequency statistics over a collection of token lists.
class TermStats {
 public:
  TermStats() = default;

  std::size_t doc_count() const { return doc_count_; }
  std::size_t total_terms() const { return total_terms_; }
  double avg_doc_len() const { return avg_doc_len_; }

  /// 0 for terms never seen.
  std::size_t doc_freq(const std::string& term) const;

  /// ln((N + 1) / (df + 0.5)); positive for every df in [0, N].
  double idf(const std::string& term) const;

  const std::unordered_map<std::string, std::size_t>& doc_freqs() const { return doc_freq_; }

  friend TermStats compute_term_stats(std::span<const std::vector<std::string>> docs);

 private:
  std::size_t doc_count_ = 0;
  std::size_t total_terms_ = 0;
  double avg_doc_len_ = 0.0;
  std::unordered_map<std::string, std::size_t> doc_freq_;
};

/// Throws ArenaError(empty_collection) on an empty collection.
TermStats compute_term_stats(std::span<const std::vector<std::string>> docs);

/// Term-weight map with no zero entries. Ordered so that reductions over it
/// are reproducible.
class SparseVector {
 public:
  using Map = std::map<std::string, double>;

  SparseVector() = default;

  void set(const std::string& term, double weight);
  double get(const std::string& term) const;
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  double norm() const;
  double dot(const SparseVector& other) const;

  Map::const_iterator begin() const { return weights_.begin(); }
  Map::const_iterator end() const { return weights_.end(); }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Map weights_;
};

/// weight(t) = tf(t) * idf(t).
SparseVector tfidf_vector(std::span<const std::string> tokens, const TermStats& stats);

/// 0 when either side has zero norm.
double cosine(const SparseVector& a, const SparseVector& b);
double cosine(std::span<const double> a, std::span<const double> b);

/// Term-wise arithmetic mean. Throws ArenaError(empty_input) on an empty list.
SparseVector centroid(std::span<const SparseVector> vectors);

using StopwordList = std::unordered_set<std::string>;

const StopwordList& default_stopwords();

/// One token per line; blank lines and lines starting with '#' are ignored.
StopwordList load_stopwords(const std::filesystem::path& path);

}  // namespace arena
