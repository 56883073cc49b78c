// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <json.hpp>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "arena/providers.hpp"

namespace arena {

// Wire protocol, JSON over HTTP POST:
//   embed     {"texts": [...]}                      -> {"vectors": [[...], ...]}
//   generate  {"prompt", "temperature", "top_p",
//              "max_tokens", "seed"}                -> {"text": "..."}
//             (optionally also "yes_prob" or "token_probs": {"yes": p})
//   entail    {"premise", "hypothesis"}             -> {"entailment": p}

struct RemoteEndpoint {
  std::string url;  // http://host[:port][/path]
  std::string api_key;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::milliseconds timeout{30000};
  int max_in_flight = 8;
};

/// Endpoint from the URL in `url_var` and the key in ARENA_API_KEY; nullopt
/// when the URL variable is unset or empty.
std::optional<RemoteEndpoint> endpoint_from_env(const char* url_var);

/// POSTs JSON, retrying connection failures, timeouts, 429 and 5xx with
/// exponential backoff. Exhausted retries raise ProviderUnavailable (or
/// RateLimited if the last answer was 429); unparseable 2xx bodies raise
/// MalformedResponse. Safe for concurrent use; at most max_in_flight
/// requests are outstanding at once.
class JsonHttpClient {
 public:
  explicit JsonHttpClient(RemoteEndpoint endpoint);

  nlohmann::json post(const nlohmann::json& body) const;
  const RemoteEndpoint& endpoint() const { return endpoint_; }

 private:
  RemoteEndpoint endpoint_;
  std::string scheme_host_port_;
  std::string path_;
  std::shared_ptr<std::counting_semaphore<>> in_flight_;
};

class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(std::string tag, RemoteEndpoint endpoint);
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
  std::string tag() const override { return tag_; }

 private:
  std::string tag_;
  JsonHttpClient client_;
};

class RemoteGenerator final : public TextGenerator {
 public:
  RemoteGenerator(std::string tag, RemoteEndpoint endpoint);
  std::string generate(const std::string& prompt, const GenerationParams& params) const override;
  std::string tag() const override { return tag_; }

  /// Raw response, for callers that read token probabilities.
  nlohmann::json generate_raw(const std::string& prompt, const GenerationParams& params) const;

 private:
  std::string tag_;
  JsonHttpClient client_;
};

/// Pointwise relevance by yes/no generation: P("yes") when the endpoint
/// reports it, otherwise 1.0 for an answer starting with "yes" and 0.0 else.
class RemoteRelevance final : public RelevanceModel {
 public:
  RemoteRelevance(std::string tag, RemoteEndpoint endpoint, std::string prompt_template = {});
  double relevance_score(const std::string& query, const std::string& doc) const override;
  std::string tag() const override { return tag_; }

 private:
  std::string tag_;
  RemoteGenerator generator_;
  std::string template_;
};

class RemoteEntailment final : public EntailmentModel {
 public:
  RemoteEntailment(std::string tag, RemoteEndpoint endpoint);
  double entailment_prob(const std::string& premise, const std::string& hypothesis) const override;
  std::string tag() const override { return tag_; }

 private:
  std::string tag_;
  JsonHttpClient client_;
};

}  // namespace arena
