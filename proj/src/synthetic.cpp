// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "arena/error.hpp"
#include "arena/rng.hpp"
#include "arena/textproc.hpp"

namespace arena {

void SyntheticSpec::validate() const {
  if (topics < 1 || rounds < 1 || queries_per_topic < 1) {
    fail(ErrorCode::config_error, "synthetic dataset needs topics, rounds and queries");
  }
  if (human_docs < 2 || llm_docs < 1) fail(ErrorCode::config_error, "synthetic dataset needs >= 2 human and >= 1 llm documents");
  if (mixed_gap_points < 0.0 || mixed_gap_points > 60.0) fail(ErrorCode::config_error, "mixed_gap_points out of range");
  if (human_key_scale < 0.0 || human_key_scale > 4.0) fail(ErrorCode::config_error, "human_key_scale out of range");
  if (llm_key_rate < 0.0 || llm_related_rate < 0.0 || llm_key_rate + llm_related_rate > 1.0) {
    fail(ErrorCode::config_error, "llm_key_rate and llm_related_rate must be rates summing to at most 1");
  }
}

namespace {

constexpr const char* kGlue[] = {"the", "of", "and", "to", "in", "for", "with", "on", "is", "are", "that", "this", "by", "from", "as", "at"};

class Lexicon {
 public:
  explicit Lexicon(Rng& rng) : rng_(rng) {}

  std::string fresh_word() {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    for (;;) {
      std::string w;
      const int syllables = 2 + static_cast<int>(rng_.below(2));
      for (int s = 0; s < syllables; ++s) {
        w += consonants[rng_.below(consonants.size())];
        w += vowels[rng_.below(vowels.size())];
      }
      if (rng_.below(2) == 0) w += consonants[rng_.below(consonants.size())];
      if (!default_stopwords().contains(w) && used_.insert(w).second) return w;
    }
  }

  std::vector<std::string> fresh_words(int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(fresh_word());
    return v;
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

struct TopicVocab {
  std::vector<std::string> key;
  std::vector<std::string> related;
};

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

std::string glue(Rng& rng) { return kGlue[rng.below(std::size(kGlue))]; }

std::string finish(std::vector<std::string> words) {
  std::string s;
  for (const auto& w : words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s + ".";
}

// A sentence in which each content slot is a key term with probability
// p_key, a related term with p_rel, else filler; glue words in between.
std::string sentence(const TopicVocab& v, const std::vector<std::string>& filler, double p_key, double p_rel,
                     Rng& rng) {
  const int slots = 5 + static_cast<int>(rng.below(5));
  std::vector<std::string> words;
  for (int i = 0; i < slots; ++i) {
    const double u = rng.unit();
    if (u < p_key) words.push_back(pick(v.key, rng));
    else if (u < p_key + p_rel) words.push_back(pick(v.related, rng));
    else words.push_back(pick(filler, rng));
    if (i + 1 < slots && rng.below(3) == 0) words.push_back(glue(rng));
  }
  return finish(std::move(words));
}

std::string document(const TopicVocab& v, const std::vector<std::string>& filler, double p_key, double p_rel, Rng& rng) {
  const int n = 4 + static_cast<int>(rng.below(3));
  std::string text;
  for (int i = 0; i < n; ++i) {
    if (!text.empty()) text += ' ';
    text += sentence(v, filler, p_key, p_rel, rng);
  }
  return text;
}

// Every key and related term, several times over, in short sentences.
std::string decoy(const TopicVocab& v, Rng& rng) {
  std::vector<std::string> pool;
  for (int rep = 0; rep < 3; ++rep) pool.insert(pool.end(), v.key.begin(), v.key.end());
  pool.insert(pool.end(), v.related.begin(), v.related.end());
  rng.shuffle(pool);
  std::string text;
  for (std::size_t i = 0; i < pool.size(); i += 6) {
    std::vector<std::string> words(pool.begin() + static_cast<long>(i),
                                   pool.begin() + static_cast<long>(std::min(pool.size(), i + 6)));
    if (!text.empty()) text += ' ';
    text += finish(std::move(words));
  }
  return text;
}

std::string backstory(const TopicVocab& v) {
  const auto& k = v.key;
  const auto& r = v.related;
  return "I want to learn about " + k[0] + " " + k[1] + " and its " + r[0] + ". Which " + k[2] + " options exist for " +
         k[3] + " in " + r[1] + " settings? Information on " + k[4] + " and " + r[2] + " " + r[3] +
         " would also help me decide.";
}

std::vector<std::string> human_queries(const TopicVocab& v, int n) {
  const auto& k = v.key;
  const std::vector<std::string> forms = {k[0] + " " + k[1],          k[2] + " " + k[3] + " " + k[0],
                                          k[1] + " " + k[4],          k[3] + " " + v.related[1],
                                          k[4] + " " + k[2] + " " + k[0], k[0] + " " + v.related[0]};
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(forms[static_cast<std::size_t>(i) % forms.size()]);
  return out;
}

constexpr int kNeighborPool = 3000;

// Takes the n pool words closest to the joined key terms out of the pool.
std::vector<std::string> nearest(std::vector<std::string>& pool, std::vector<EmbeddingVector>& vectors,
                                 const std::vector<std::string>& key, const Embedder& embedder, int n) {
  std::string joined;
  for (const auto& k : key) joined += (joined.empty() ? "" : " ") + k;
  const std::vector<std::string> probe{joined};
  const auto target = embedder.embed(probe).at(0);
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    scored.emplace_back(-cosine(std::span<const double>(vectors[i].values), std::span<const double>(target.values)), i);
  }
  std::sort(scored.begin(), scored.end());
  scored.resize(std::min<std::size_t>(scored.size(), static_cast<std::size_t>(n)));
  std::vector<std::string> out;
  std::vector<std::size_t> taken;
  for (const auto& [neg, i] : scored) {
    out.push_back(pool[i]);
    taken.push_back(i);
  }
  std::sort(taken.rbegin(), taken.rend());
  for (std::size_t i : taken) {
    pool.erase(pool.begin() + static_cast<long>(i));
    vectors.erase(vectors.begin() + static_cast<long>(i));
  }
  return out;
}

std::string topic_id(int t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "t%02d", t + 1);
  return buf;
}

}  // namespace

Dataset make_synthetic_dataset(const SyntheticSpec& spec, const Embedder* related) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, "synthetic"));
  Lexicon lex(rng);
  const auto filler = lex.fresh_words(400);

  std::vector<std::string> pool;
  std::vector<EmbeddingVector> pool_vectors;
  if (!spec.related_embedder.empty()) {
    if (related == nullptr) fail(ErrorCode::config_error, "synthetic dataset needs the embedder " + spec.related_embedder);
    pool = lex.fresh_words(kNeighborPool);
    pool_vectors = related->embed(pool);
  }

  Dataset data;
  std::vector<TopicVocab> vocab;
  for (int t = 0; t < spec.topics; ++t) {
    TopicVocab v;
    v.key = lex.fresh_words(5);
    v.related = pool.empty() ? lex.fresh_words(10) : nearest(pool, pool_vectors, v.key, *related, 10);
    Topic topic{topic_id(t), backstory(v), {}};
    const auto qs = human_queries(v, spec.queries_per_topic);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      data.queries.push_back({topic.id + "/q" + std::to_string(i + 1), topic.id, qs[i], {AgentKind::human, "", ""}});
    }
    data.topics.push_back(std::move(topic));
    vocab.push_back(std::move(v));
  }

  // Units (topic, round >= 2) that carry a decoy. A decoy turns nDCG@1 of the
  // mixed corpus from 1 into (2^1 - 1) / (2^2 - 1) = 1/3.
  std::vector<std::pair<int, int>> units;
  for (int t = 0; t < spec.topics; ++t) {
    for (int r = 2; r <= spec.rounds; ++r) units.emplace_back(t, r);
  }
  const auto decoys_wanted = static_cast<std::size_t>(
      std::lround(spec.mixed_gap_points / 100.0 * static_cast<double>(units.size()) * 1.5));
  std::set<std::pair<int, int>> decoy_units;
  for (std::size_t i : rng.sample_indices(units.size(), std::min(decoys_wanted, units.size()))) {
    decoy_units.insert(units[i]);
  }

  const int per_round = spec.human_docs + spec.llm_docs;
  for (int t = 0; t < spec.topics; ++t) {
    Topic& topic = data.topics[static_cast<std::size_t>(t)];
    const TopicVocab& v = vocab[static_cast<std::size_t>(t)];
    for (int r = 1; r <= spec.rounds; ++r) {
      std::vector<int> labels(static_cast<std::size_t>(per_round));
      std::iota(labels.begin(), labels.end(), 1);
      rng.shuffle(labels);
      for (int j = 0; j < per_round; ++j) {
        Document d;
        d.id = topic.id + "-r" + std::to_string(r) + "-d" + std::to_string(labels[static_cast<std::size_t>(j)]);
        d.topic_id = topic.id;
        d.round_created = r;
        int grade = 0;
        if (j < spec.human_docs) {
          d.author = {AgentKind::human, "", ""};
          // One strong document per round, the rest weaker.
          grade = j == 0 ? 2 : (j == 1 ? 1 : static_cast<int>(rng.below(2)));
          const double p_key = grade == 2 ? 0.22 : (grade == 1 ? 0.10 : 0.03);
          d.text = document(v, filler, p_key * spec.human_key_scale, 0.10, rng);
        } else {
          d.author = {AgentKind::llm, "synthetic", ""};
          grade = 1;
          const bool is_decoy = j == spec.human_docs && decoy_units.contains({t, r});
          d.text = is_decoy ? decoy(v, rng) : document(v, filler, spec.llm_key_rate, spec.llm_related_rate, rng);
        }
        topic.judgments[topic.id][d.id] = grade;
        data.documents.push_back(std::move(d));
      }
    }
  }
  return data;
}

std::string human_variations_jsonl(const Dataset& data) {
  std::ostringstream out;
  for (const auto& t : data.topics) {
    const auto qs = data.queries_of(t.id);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (qs[i].origin.kind != AgentKind::human) continue;
      out << nlohmann::json{{"topic_id", t.id}, {"query_text", qs[i].text}, {"frequency", static_cast<int>(qs.size() - i)}}
                 .dump()
          << '\n';
    }
  }
  return out.str();
}

}  // namespace arena
