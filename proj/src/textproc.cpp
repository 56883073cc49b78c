// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/textproc.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include "arena/error.hpp"

namespace arena {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

void push_trimmed(std::string_view text, std::size_t begin, std::size_t end,
                  std::vector<SentenceSpan>& out) {
  while (begin < end && is_space(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(text[end - 1]))) --end;
  if (begin < end) out.push_back({begin, end});
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      flush();
    } else if (is_ascii_punct(c)) {
      continue;
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      current.push_back(ch);
    }
  }
  flush();
  return tokens;
}

std::vector<SentenceSpan> sentence_spans(std::string_view text) {
  std::vector<SentenceSpan> spans;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_terminator(text[i])) continue;
    bool at_boundary = i + 1 == text.size() || is_space(static_cast<unsigned char>(text[i + 1]));
    if (!at_boundary) continue;
    push_trimmed(text, start, i + 1, spans);
    start = i + 1;
  }
  push_trimmed(text, start, text.size(), spans);
  return spans;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& s : sentence_spans(text)) {
    out.emplace_back(text.substr(s.begin, s.end - s.begin));
  }
  return out;
}

std::size_t TermStats::doc_freq(const std::string& term) const {
  auto it = doc_freq_.find(term);
  return it == doc_freq_.end() ? 0 : it->second;
}

double TermStats::idf(const std::string& term) const {
  return std::log((static_cast<double>(doc_count_) + 1.0) /
                  (static_cast<double>(doc_freq(term)) + 0.5));
}

TermStats compute_term_stats(std::span<const std::vector<std::string>> docs) {
  if (docs.empty()) fail(ErrorCode::empty_collection, "term statistics need at least one document");
  TermStats stats;
  stats.doc_count_ = docs.size();
  std::unordered_set<std::string> seen;
  for (const auto& doc : docs) {
    stats.total_terms_ += doc.size();
    seen.clear();
    for (const auto& t : doc) {
      if (seen.insert(t).second) ++stats.doc_freq_[t];
    }
  }
  stats.avg_doc_len_ = static_cast<double>(stats.total_terms_) / static_cast<double>(stats.doc_count_);
  return stats;
}

void SparseVector::set(const std::string& term, double weight) {
  if (weight == 0.0) {
    weights_.erase(term);
  } else {
    weights_[term] = weight;
  }
}

double SparseVector::get(const std::string& term) const {
  auto it = weights_.find(term);
  return it == weights_.end() ? 0.0 : it->second;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& [t, w] : weights_) s += w * w;
  return std::sqrt(s);
}

double SparseVector::dot(const SparseVector& other) const {
  double s = 0.0;
  auto a = weights_.begin();
  auto b = other.weights_.begin();
  while (a != weights_.end() && b != other.weights_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

SparseVector tfidf_vector(std::span<const std::string> tokens, const TermStats& stats) {
  std::map<std::string, int> tf;
  for (const auto& t : tokens) ++tf[t];
  SparseVector v;
  for (const auto& [term, count] : tf) v.set(term, count * stats.idf(term));
  return v;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::invalid_argument, "cosine over vectors of different dimension");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SparseVector centroid(std::span<const SparseVector> vectors) {
  if (vectors.empty()) fail(ErrorCode::empty_input, "centroid of an empty list");
  std::map<std::string, double> sum;
  for (const auto& v : vectors) {
    for (const auto& [t, w] : v) sum[t] += w;
  }
  SparseVector out;
  const double n = static_cast<double>(vectors.size());
  for (const auto& [t, w] : sum) out.set(t, w / n);
  return out;
}

const StopwordList& default_stopwords() {
  static const StopwordList words = {
      "a",     "about", "above", "after",  "again", "against", "all",   "am",    "an",
      "and",   "any",   "are",   "as",     "at",    "be",      "because", "been", "before",
      "being", "below", "between", "both", "but",   "by",      "can",   "could", "did",
      "do",    "does",  "doing", "down",   "during", "each",   "few",   "for",   "from",
      "further", "had", "has",   "have",   "having", "he",     "her",   "here",  "hers",
      "herself", "him", "himself", "his",  "how",   "i",       "if",    "in",    "into",
      "is",    "it",    "its",   "itself", "just",  "me",      "more",  "most",  "my",
      "myself", "no",   "nor",   "not",    "now",   "of",      "off",   "on",    "once",
      "only",  "or",    "other", "our",    "ours",  "ourselves", "out", "over",  "own",
      "same",  "she",   "should", "so",    "some",  "such",    "than",  "that",  "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
      "those", "through", "to",  "too",    "under", "until",   "up",    "very",  "was",
      "we",    "were",  "what",  "when",   "where", "which",   "while", "who",   "whom",
      "why",   "will",  "with",  "would",  "you",   "your",    "yours", "yourself",
      "yourselves", "want", "wants", "know", "find", "looking", "also", "like", "get"};
  return words;
}

StopwordList load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::malformed_file, "cannot open stopword list " + path.string());
  StopwordList words;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = tokenize(line);
    if (line.empty() || line[0] == '#' || toks.empty()) continue;
    words.insert(toks.front());
  }
  return words;
}

}  // namespace arena
