// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class ErrorCode {
  invalid_argument,
  config_error,
  // data
  kind_mismatch,
  incomplete_round,
  empty_collection,
  empty_input,
  missing_topic,
  malformed_file,
  no_candidates,
  pool_too_small,
  empty_sentence,
  insufficient_ranking,
  term_limit_exceeded,
  insufficient_documents,
  invalid_rank,
  missing_judgment,
  unknown_agent,
  length_mismatch,
  too_few_pairs,
  invalid_m,
  // providers
  provider_unavailable,
  rate_limited,
  malformed_response,
};

std::string_view to_string(ErrorCode code);

/// Coarse failure class; the CLI maps it onto its exit code.
enum class ErrorClass { usage, config, provider, data };

ErrorClass classify(ErrorCode code);

class ArenaError : public std::runtime_error {
 public:
  ArenaError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return classify(code_); }
  bool retryable() const noexcept { return code_ == ErrorCode::rate_limited; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw ArenaError(code, message);
}

}  // namespace arena
