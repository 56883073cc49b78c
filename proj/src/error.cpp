// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/error.hpp"

namespace arena {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::incomplete_round: return "IncompleteRound";
    case ErrorCode::empty_collection: return "EmptyCollection";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::missing_topic: return "MissingTopic";
    case ErrorCode::malformed_file: return "MalformedFile";
    case ErrorCode::no_candidates: return "NoCandidates";
    case ErrorCode::pool_too_small: return "PoolTooSmall";
    case ErrorCode::empty_sentence: return "EmptySentence";
    case ErrorCode::insufficient_ranking: return "InsufficientRanking";
    case ErrorCode::term_limit_exceeded: return "TermLimitExceeded";
    case ErrorCode::insufficient_documents: return "InsufficientDocuments";
    case ErrorCode::invalid_rank: return "InvalidRank";
    case ErrorCode::missing_judgment: return "MissingJudgment";
    case ErrorCode::unknown_agent: return "UnknownAgent";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::too_few_pairs: return "TooFewPairs";
    case ErrorCode::invalid_m: return "InvalidM";
    case ErrorCode::provider_unavailable: return "ProviderUnavailable";
    case ErrorCode::rate_limited: return "RateLimited";
    case ErrorCode::malformed_response: return "MalformedResponse";
  }
  return "Unknown";
}

ErrorClass classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return ErrorClass::usage;
    case ErrorCode::config_error:
      return ErrorClass::config;
    case ErrorCode::provider_unavailable:
    case ErrorCode::rate_limited:
    case ErrorCode::malformed_response:
      return ErrorClass::provider;
    default:
      return ErrorClass::data;
  }
}

}  // namespace arena
