// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arena/error.hpp"

namespace arena {

double scaled_rank_promotion(int prev, int next, int n) {
  if (n < 2 || prev < 1 || next < 1 || prev > n || next > n) {
    fail(ErrorCode::invalid_rank, "ranks " + std::to_string(prev) + " -> " + std::to_string(next) + " in a list of " +
                                      std::to_string(n));
  }
  const int delta = prev - next;
  if (delta > 0) return static_cast<double>(delta) / (prev - 1);
  if (delta < 0) return static_cast<double>(delta) / (n - prev);
  return 0.0;
}

std::vector<PromotionRecord> promotion_records(const CompetitionLog& log) {
  std::vector<PromotionRecord> out;
  for (std::size_t r = 1; r < log.rounds.size(); ++r) {
    const int round = log.rounds[r].index;
    for (std::size_t qi = 0; qi < log.queries.size(); ++qi) {
      const int n = static_cast<int>(log.rounds[r].rankings[qi].size());
      for (const auto& p : log.participants) {
        out.push_back({p.agent, p.slot, log.queries[qi].id, round, log.rank_of(p.slot, round - 1, qi),
                       log.rank_of(p.slot, round, qi), n});
      }
    }
  }
  return out;
}

double ndcg_at_1(const RankedList& ranking, const std::map<std::string, int>& grades) {
  if (ranking.entries.empty()) fail(ErrorCode::empty_input, "nDCG of an empty ranking");
  auto gain = [](int g) { return std::ldexp(1.0, g) - 1.0; };
  double best = 0.0;
  for (const auto& e : ranking.entries) {
    auto it = grades.find(e.doc_id);
    if (it == grades.end()) {
      fail(ErrorCode::missing_judgment, "no grade for " + e.doc_id + " under " + ranking.query_id);
    }
    best = std::max(best, gain(it->second));
  }
  if (best == 0.0) return 1.0;
  return gain(grades.at(ranking.entries.front().doc_id)) / best;
}

namespace {

std::vector<std::string> slots_of(const CompetitionLog& log, const AgentId& agent) {
  std::vector<std::string> slots;
  for (const auto& p : log.participants) {
    if (p.agent == agent) slots.push_back(p.slot);
  }
  if (slots.empty()) fail(ErrorCode::unknown_agent, "agent " + agent.key() + " is not in the competition");
  return slots;
}

}  // namespace

double average_rank(const CompetitionLog& log, const AgentId& agent) {
  const auto slots = slots_of(log, agent);
  double sum = 0.0;
  std::size_t cells = 0;
  for (const auto& round : log.rounds) {
    for (std::size_t qi = 0; qi < log.queries.size(); ++qi) {
      for (const auto& s : slots) {
        sum += log.rank_of(s, round.index, qi);
        ++cells;
      }
    }
  }
  if (cells == 0) fail(ErrorCode::unknown_agent, "competition has no rounds");
  return sum / static_cast<double>(cells);
}

std::vector<double> average_rank_by_round(const CompetitionLog& log, const AgentId& agent) {
  const auto slots = slots_of(log, agent);
  std::vector<double> out;
  for (const auto& round : log.rounds) {
    double sum = 0.0;
    for (std::size_t qi = 0; qi < log.queries.size(); ++qi) {
      for (const auto& s : slots) sum += log.rank_of(s, round.index, qi);
    }
    out.push_back(sum / static_cast<double>(log.queries.size() * slots.size()));
  }
  return out;
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    f *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double step = d * c;
    f *= step;
    if (std::fabs(step - 1.0) < eps) break;
  }
  return f;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    fail(ErrorCode::invalid_argument, "incomplete beta outside its domain");
  }
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_front) * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) fail(ErrorCode::invalid_argument, "degrees of freedom must be positive");
  if (std::isnan(t)) fail(ErrorCode::invalid_argument, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::length_mismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " values");
  }
  const std::size_t n = a.size();
  if (n < 2) fail(ErrorCode::too_few_pairs, "paired t-test needs at least two pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  TTestResult out;
  out.df = static_cast<int>(n - 1);
  if (std::all_of(d.begin(), d.end(), [&](double x) { return x == d.front(); })) {
    if (d.front() == 0.0) return {0.0, 1.0, out.df};
    return {std::copysign(std::numeric_limits<double>::infinity(), d.front()), 0.0, out.df};
  }
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  out.p = student_t_two_tailed(out.t, out.df);
  return out;
}

std::vector<double> bonferroni(std::span<const double> p_values, int m) {
  if (p_values.empty() || m < static_cast<int>(p_values.size())) {
    fail(ErrorCode::invalid_m, "m = " + std::to_string(m) + " for " + std::to_string(p_values.size()) + " p-values");
  }
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(std::min(1.0, p * m));
  return out;
}

}  // namespace arena
