// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/remote_providers.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "arena/error.hpp"
#include "arena/prompts.hpp"

namespace arena {

using json = nlohmann::json;

std::optional<RemoteEndpoint> endpoint_from_env(const char* url_var) {
  const char* url = std::getenv(url_var);
  if (url == nullptr || *url == '\0') return std::nullopt;
  RemoteEndpoint ep;
  ep.url = url;
  if (const char* key = std::getenv("ARENA_API_KEY")) ep.api_key = key;
  return ep;
}

JsonHttpClient::JsonHttpClient(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  const std::string prefix = "http://";
  if (endpoint_.url.rfind(prefix, 0) != 0) {
    fail(ErrorCode::config_error, "provider url must start with http://: " + endpoint_.url);
  }
  auto slash = endpoint_.url.find('/', prefix.size());
  scheme_host_port_ = endpoint_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : endpoint_.url.substr(slash);
  if (endpoint_.max_retries < 0) fail(ErrorCode::config_error, "max_retries must be >= 0");
  in_flight_ = std::make_shared<std::counting_semaphore<>>(std::max(1, endpoint_.max_in_flight));
}

json JsonHttpClient::post(const json& body) const {
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);

  std::string last_error = "no attempt made";
  bool rate_limited = false;
  auto backoff = endpoint_.initial_backoff;
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Result res;
    {
      in_flight_->acquire();
      struct Release {
        std::counting_semaphore<>* s;
        ~Release() { s->release(); }
      } release{in_flight_.get()};
      httplib::Client client(scheme_host_port_);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      res = client.Post(path_, headers, payload, "application/json");
    }
    if (!res) {
      rate_limited = false;
      last_error = "request to " + endpoint_.url + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      rate_limited = res->status == 429;
      last_error = "HTTP " + std::to_string(res->status) + " from " + endpoint_.url;
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      fail(ErrorCode::provider_unavailable, "HTTP " + std::to_string(res->status) + " from " + endpoint_.url);
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      fail(ErrorCode::malformed_response, "invalid JSON from " + endpoint_.url + ": " + e.what());
    }
  }
  fail(rate_limited ? ErrorCode::rate_limited : ErrorCode::provider_unavailable,
       last_error + " (after " + std::to_string(endpoint_.max_retries) + " retries)");
}

RemoteEmbedder::RemoteEmbedder(std::string tag, RemoteEndpoint endpoint)
    : tag_(std::move(tag)), client_(std::move(endpoint)) {}

std::vector<EmbeddingVector> RemoteEmbedder::embed(std::span<const std::string> texts) const {
  json req = {{"texts", json::array()}};
  for (const auto& t : texts) req["texts"].push_back(t);
  const json res = client_.post(req);
  std::vector<EmbeddingVector> out;
  try {
    const auto& vectors = res.at("vectors");
    if (vectors.size() != texts.size()) {
      fail(ErrorCode::malformed_response, "expected " + std::to_string(texts.size()) + " vectors, got " +
                                              std::to_string(vectors.size()));
    }
    for (const auto& v : vectors) {
      EmbeddingVector e{v.get<std::vector<double>>()};
      double norm = 0.0;
      for (double x : e.values) {
        if (!std::isfinite(x)) fail(ErrorCode::malformed_response, "non-finite embedding component");
        norm += x * x;
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& x : e.values) x /= norm;
      }
      out.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed_response, std::string("embed response: ") + e.what());
  }
  return out;
}

RemoteGenerator::RemoteGenerator(std::string tag, RemoteEndpoint endpoint)
    : tag_(std::move(tag)), client_(std::move(endpoint)) {}

json RemoteGenerator::generate_raw(const std::string& prompt, const GenerationParams& params) const {
  params.validate();
  return client_.post({{"prompt", prompt},
                       {"temperature", params.temperature},
                       {"top_p", params.top_p},
                       {"max_tokens", params.max_tokens},
                       {"seed", params.seed}});
}

std::string RemoteGenerator::generate(const std::string& prompt, const GenerationParams& params) const {
  const json res = generate_raw(prompt, params);
  if (!res.contains("text") || !res["text"].is_string()) {
    fail(ErrorCode::malformed_response, "generate response has no string field 'text'");
  }
  return res["text"].get<std::string>();
}

RemoteRelevance::RemoteRelevance(std::string tag, RemoteEndpoint endpoint, std::string prompt_template)
    : tag_(std::move(tag)),
      generator_(tag_, std::move(endpoint)),
      template_(prompt_template.empty() ? prompts::kRelevanceYesNo : std::move(prompt_template)) {}

double RemoteRelevance::relevance_score(const std::string& query, const std::string& doc) const {
  GenerationParams params;
  params.temperature = 0.0;
  params.top_p = 1.0;
  params.max_tokens = 2;
  const json res = generator_.generate_raw(render_template(template_, {{"query", query}, {"document", doc}}), params);
  auto clamp01 = [](double p) { return std::clamp(p, 0.0, 1.0); };
  if (res.contains("yes_prob") && res["yes_prob"].is_number()) return clamp01(res["yes_prob"].get<double>());
  if (res.contains("token_probs") && res["token_probs"].is_object()) {
    for (const char* key : {"yes", "Yes", "YES"}) {
      if (res["token_probs"].contains(key) && res["token_probs"][key].is_number()) {
        return clamp01(res["token_probs"][key].get<double>());
      }
    }
  }
  if (!res.contains("text") || !res["text"].is_string()) {
    fail(ErrorCode::malformed_response, "relevance response has no string field 'text'");
  }
  std::string text = res["text"].get<std::string>();
  auto first = text.find_first_not_of(" \t\r\n\"'");
  if (first == std::string::npos) return 0.0;
  std::string head = text.substr(first, 3);
  for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return head == "yes" ? 1.0 : 0.0;
}

RemoteEntailment::RemoteEntailment(std::string tag, RemoteEndpoint endpoint)
    : tag_(std::move(tag)), client_(std::move(endpoint)) {}

double RemoteEntailment::entailment_prob(const std::string& premise, const std::string& hypothesis) const {
  const json res = client_.post({{"premise", premise}, {"hypothesis", hypothesis}});
  if (!res.contains("entailment") || !res["entailment"].is_number()) {
    fail(ErrorCode::malformed_response, "entail response has no numeric field 'entailment'");
  }
  return std::clamp(res["entailment"].get<double>(), 0.0, 1.0);
}

}  // namespace arena
