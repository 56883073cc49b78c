// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "arena/core.hpp"

namespace arena {

/// With d = prev - next: d / (prev - 1) for a promotion, d / (n - prev) for a
/// demotion, 0 when the rank is unchanged. Throws ArenaError(invalid_rank)
/// unless 1 <= prev, next <= n and n >= 2.
double scaled_rank_promotion(int prev, int next, int n);

struct PromotionRecord {
  AgentId agent;
  std::string slot;
  std::string query_id;
  int round = 0;  // the round of new_rank
  int prev_rank = 0;
  int new_rank = 0;
  int n = 0;

  double value() const { return scaled_rank_promotion(prev_rank, new_rank, n); }
};

/// One record per (slot, query, round >= 2) of a log, in round, query, slot order.
std::vector<PromotionRecord> promotion_records(const CompetitionLog& log);

/// gain(rank-1 document) / max gain over the ranked documents, gain(g) = 2^g - 1.
/// 1.0 when every grade is 0. Throws ArenaError(missing_judgment) for an
/// ungraded document and ArenaError(empty_input) for an empty ranking.
double ndcg_at_1(const RankedList& ranking, const std::map<std::string, int>& grades);

/// Mean rank of the agent's documents over every (round, query) cell of the
/// slots it occupies. Throws ArenaError(unknown_agent).
double average_rank(const CompetitionLog& log, const AgentId& agent);

/// Mean rank per round (index 0 = round 1).
std::vector<double> average_rank_by_round(const CompetitionLog& log, const AgentId& agent);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_tailed(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int df = 0;
};

/// Two-tailed paired t-test on a - b. All-zero differences give (0, 1);
/// constant nonzero differences give (+-inf, 0). Throws
/// ArenaError(length_mismatch) and ArenaError(too_few_pairs).
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// min(1, p * m) for each p. Throws ArenaError(invalid_m) unless m >= |p| >= 1.
std::vector<double> bonferroni(std::span<const double> p_values, int m);

}  // namespace arena
