// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "arena/error.hpp"
#include "arena/experiments.hpp"
#include "arena/metrics.hpp"

namespace arena {

using json = nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string joined(const std::vector<std::string>& v) {
  if (v.empty()) return "-";
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
  return s;
}

template <class Key>
std::size_t index_of(std::vector<Key>& order, const Key& k) {
  auto it = std::find(order.begin(), order.end(), k);
  if (it != order.end()) return static_cast<std::size_t>(it - order.begin());
  order.push_back(k);
  return order.size() - 1;
}

std::string label(const CompetitionLog& log, const std::string& key) {
  auto it = log.labels.find(key);
  if (it == log.labels.end()) fail(ErrorCode::malformed_file, "log of topic " + log.topic_id + " lacks label " + key);
  return it->second;
}

}  // namespace

std::string CsvTable::to_csv(const std::string& hash) const {
  std::string out = "# arena config_hash=" + hash + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Effectiveness

const EffectivenessCell* EffectivenessSummary::find(const std::string& ranker, const std::string& query_agent,
                                                    CorpusKind corpus) const {
  for (const auto& c : cells) {
    if (c.ranker == ranker && c.query_agent == query_agent && c.corpus == corpus) return &c;
  }
  return nullptr;
}

EffectivenessSummary summarize_effectiveness(std::span<const EvalRecord> records, double alpha) {
  using CellKey = std::tuple<std::string, std::string, CorpusKind>;
  std::vector<CellKey> order;
  // cell -> unit -> (sum, count)
  std::vector<std::map<std::string, std::pair<double, int>>> acc;
  for (const auto& r : records) {
    const std::size_t ci = index_of(order, CellKey{r.ranker, r.query_agent, r.corpus});
    if (acc.size() < order.size()) acc.resize(order.size());
    if (r.ranked.size() != r.grades.size()) fail(ErrorCode::malformed_file, "evaluation record with unaligned grades");
    RankedList list;
    list.query_id = r.query_id;
    std::map<std::string, int> grades;
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
      list.entries.push_back({r.ranked[i], 0.0});
      grades[r.ranked[i]] = r.grades[i];
    }
    char unit[64];
    std::snprintf(unit, sizeof unit, "#r%03d", r.round);
    auto& slot = acc[ci][r.topic_id + unit];
    slot.first += ndcg_at_1(list, grades);
    slot.second += 1;
  }

  EffectivenessSummary out;
  for (std::size_t ci = 0; ci < order.size(); ++ci) {
    EffectivenessCell c;
    std::tie(c.ranker, c.query_agent, c.corpus) = order[ci];
    double sum = 0.0;
    for (const auto& [unit, sc] : acc[ci]) {
      c.units.emplace_back(unit, sc.first / sc.second);
      sum += c.units.back().second;
    }
    c.mean = c.units.empty() ? 0.0 : sum / static_cast<double>(c.units.size());
    out.cells.push_back(std::move(c));
  }

  // Families: cells that agree on two of (ranker, query agent, corpus).
  struct Family {
    std::string name;
    std::vector<std::size_t> members;
  };
  std::vector<std::pair<std::string, Family>> families;
  auto add = [&](const std::string& kind, const std::string& key, std::size_t ci) {
    for (auto& [k, f] : families) {
      if (k == kind + "|" + key) {
        f.members.push_back(ci);
        return;
      }
    }
    families.push_back({kind + "|" + key, Family{kind, {ci}}});
  };
  for (std::size_t ci = 0; ci < out.cells.size(); ++ci) {
    const auto& c = out.cells[ci];
    const std::string corpus(to_string(c.corpus));
    add("corpus", c.ranker + "|" + c.query_agent, ci);
    add("query_agent", c.ranker + "|" + corpus, ci);
    add("ranker", c.query_agent + "|" + corpus, ci);
  }

  for (const auto& [key, fam] : families) {
    std::vector<Comparison> comps;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      for (std::size_t j = i + 1; j < fam.members.size(); ++j) {
        const auto& a = out.cells[fam.members[i]];
        const auto& b = out.cells[fam.members[j]];
        Comparison cmp;
        cmp.family = fam.name;
        cmp.ranker = fam.name == "ranker" ? "*" : a.ranker;
        cmp.query_agent = fam.name == "query_agent" ? "*" : a.query_agent;
        cmp.corpus = fam.name == "corpus" ? "*" : std::string(to_string(a.corpus));
        if (fam.name == "corpus") {
          cmp.a = to_string(a.corpus);
          cmp.b = to_string(b.corpus);
        } else if (fam.name == "query_agent") {
          cmp.a = a.query_agent;
          cmp.b = b.query_agent;
        } else {
          cmp.a = a.ranker;
          cmp.b = b.ranker;
        }
        std::map<std::string, double> bv(b.units.begin(), b.units.end());
        std::vector<double> xa, xb;
        for (const auto& [unit, v] : a.units) {
          if (auto it = bv.find(unit); it != bv.end()) {
            xa.push_back(v);
            xb.push_back(it->second);
          }
        }
        cmp.units = xa.size();
        if (xa.size() >= 2) {
          double sa = 0.0, sb = 0.0;
          for (std::size_t k = 0; k < xa.size(); ++k) {
            sa += xa[k];
            sb += xb[k];
          }
          cmp.mean_a = sa / static_cast<double>(xa.size());
          cmp.mean_b = sb / static_cast<double>(xb.size());
          const auto tt = paired_t_test(xa, xb);
          cmp.t = tt.t;
          cmp.p = tt.p;
        }
        comps.push_back(std::move(cmp));
        pairs.emplace_back(fam.members[i], fam.members[j]);
      }
    }
    if (comps.empty()) continue;
    std::vector<double> ps;
    for (const auto& c : comps) ps.push_back(c.p);
    const auto adjusted = bonferroni(ps, static_cast<int>(ps.size()));
    for (std::size_t k = 0; k < comps.size(); ++k) {
      comps[k].p_adjusted = adjusted[k];
      comps[k].significant = comps[k].units >= 2 && adjusted[k] < alpha;
      if (comps[k].significant) {
        auto& a = out.cells[pairs[k].first];
        auto& b = out.cells[pairs[k].second];
        auto& ma = fam.name == "corpus" ? a.differs_by_corpus
                   : fam.name == "query_agent" ? a.differs_by_query_agent
                                               : a.differs_by_ranker;
        auto& mb = fam.name == "corpus" ? b.differs_by_corpus
                   : fam.name == "query_agent" ? b.differs_by_query_agent
                                               : b.differs_by_ranker;
        ma.push_back(comps[k].b);
        mb.push_back(comps[k].a);
      }
      out.comparisons.push_back(std::move(comps[k]));
    }
  }
  return out;
}

CsvTable EffectivenessSummary::table() const {
  CsvTable t{{"ranker", "query_agent", "corpus", "ndcg_at_1_x100", "units", "differs_by_corpus",
              "differs_by_query_agent", "differs_by_ranker"},
             {}};
  for (const auto& c : cells) {
    t.rows.push_back({c.ranker, c.query_agent, std::string(to_string(c.corpus)), num(100.0 * c.mean),
                      std::to_string(c.units.size()), joined(c.differs_by_corpus), joined(c.differs_by_query_agent),
                      joined(c.differs_by_ranker)});
  }
  return t;
}

CsvTable EffectivenessSummary::comparisons_table() const {
  CsvTable t{{"family", "ranker", "query_agent", "corpus", "a", "b", "mean_a_x100", "mean_b_x100", "units", "t", "p",
              "p_bonferroni", "significant"},
             {}};
  for (const auto& c : comparisons) {
    t.rows.push_back({c.family, c.ranker, c.query_agent, c.corpus, c.a, c.b, num(100.0 * c.mean_a),
                      num(100.0 * c.mean_b), std::to_string(c.units), num(c.t), sci(c.p), sci(c.p_adjusted),
                      c.significant ? "yes" : "no"});
  }
  return t;
}

std::string eval_records_to_jsonl(std::span<const EvalRecord> records, const std::string& hash) {
  std::string out;
  for (const auto& r : records) {
    out += json{{"config_hash", hash},
                {"ranker", r.ranker},
                {"query_agent", r.query_agent},
                {"corpus", to_string(r.corpus)},
                {"topic_id", r.topic_id},
                {"round", r.round},
                {"query_id", r.query_id},
                {"ranked", r.ranked},
                {"grades", r.grades}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<EvalRecord> eval_records_from_jsonl(const std::string& text) {
  std::vector<EvalRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      EvalRecord r;
      r.ranker = j.at("ranker").get<std::string>();
      r.query_agent = j.at("query_agent").get<std::string>();
      r.corpus = parse_corpus_kind(j.at("corpus").get<std::string>());
      r.topic_id = j.at("topic_id").get<std::string>();
      r.round = j.at("round").get<int>();
      r.query_id = j.at("query_id").get<std::string>();
      r.ranked = j.at("ranked").get<std::vector<std::string>>();
      r.grades = j.at("grades").get<std::vector<int>>();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      fail(ErrorCode::malformed_file, "evaluation record " + std::to_string(no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Offline promotion

double evaluated_promotion(const CompetitionLog& log) {
  const std::string slot = label(log, "evaluated_slot");
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& rec : promotion_records(log)) {
    if (rec.slot != slot) continue;
    sum += rec.value();
    ++n;
  }
  if (n == 0) fail(ErrorCode::malformed_file, "log has no round transitions for slot " + slot);
  return sum / static_cast<double>(n);
}

const PromotionCell* OfflineSummary::find(const std::string& agent, const std::string& ranker) const {
  for (const auto& c : cells) {
    if (c.agent == agent && c.ranker == ranker) return &c;
  }
  return nullptr;
}

OfflineSummary summarize_offline(std::span<const CompetitionLog> logs) {
  using Key = std::pair<std::string, std::string>;
  std::vector<Key> order;
  std::vector<std::pair<double, std::size_t>> acc;
  std::vector<std::string> params;
  for (const auto& log : logs) {
    const std::size_t i = index_of(order, Key{label(log, "agent"), label(log, "ranker")});
    if (acc.size() < order.size()) {
      acc.emplace_back(0.0, 0);
      params.push_back(label(log, "params"));
    }
    acc[i].first += evaluated_promotion(log);
    acc[i].second += 1;
  }
  OfflineSummary out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.cells.push_back({order[i].first, order[i].second, params[i], acc[i].first / static_cast<double>(acc[i].second),
                         acc[i].second});
  }
  return out;
}

CsvTable OfflineSummary::matrix() const {
  std::vector<std::string> agents, rankers;
  for (const auto& c : cells) {
    index_of(agents, c.agent);
    index_of(rankers, c.ranker);
  }
  CsvTable t;
  t.columns.push_back("agent");
  for (const auto& r : rankers) t.columns.push_back(r);
  for (const auto& a : agents) {
    std::vector<std::string> row{a};
    for (const auto& r : rankers) {
      const auto* c = find(a, r);
      row.push_back(c ? num(c->mean) : "");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable OfflineSummary::long_table() const {
  CsvTable t{{"agent", "ranker", "params", "mean_scaled_promotion", "units"}, {}};
  for (const auto& c : cells) t.rows.push_back({c.agent, c.ranker, c.params, num(c.mean), std::to_string(c.units)});
  return t;
}

// ---------------------------------------------------------------------------
// Online simulation

OnlineSummary summarize_online(std::span<const CompetitionLog> logs) {
  using Key = std::tuple<std::string, std::string, std::string>;
  struct Acc {
    AgentKind kind = AgentKind::static_agent;
    std::vector<double> round_sum;
    std::vector<std::size_t> round_cells;
    std::size_t competitions = 0;
  };
  std::vector<Key> order;
  std::vector<Acc> acc;
  for (const auto& log : logs) {
    const std::string ranker = label(log, "ranker");
    const std::string qagent = label(log, "query_agent");
    std::vector<std::size_t> seen;
    for (const auto& p : log.participants) {
      const std::size_t i = index_of(order, Key{ranker, qagent, label(log, "agent." + p.slot)});
      if (acc.size() < order.size()) acc.push_back({p.agent.kind, {}, {}, 0});
      Acc& a = acc[i];
      if (a.round_sum.size() < log.rounds.size()) {
        a.round_sum.resize(log.rounds.size(), 0.0);
        a.round_cells.resize(log.rounds.size(), 0);
      }
      for (std::size_t r = 0; r < log.rounds.size(); ++r) {
        for (std::size_t qi = 0; qi < log.queries.size(); ++qi) {
          a.round_sum[r] += log.rank_of(p.slot, log.rounds[r].index, qi);
          a.round_cells[r] += 1;
        }
      }
      if (std::find(seen.begin(), seen.end(), i) == seen.end()) {
        seen.push_back(i);
        a.competitions += 1;
      }
    }
  }
  OnlineSummary out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    OnlineRow row;
    std::tie(row.ranker, row.query_agent, row.agent) = order[i];
    row.kind = acc[i].kind;
    row.competitions = acc[i].competitions;
    double sum = 0.0;
    std::size_t cells = 0;
    for (std::size_t r = 0; r < acc[i].round_sum.size(); ++r) {
      row.by_round.push_back(acc[i].round_sum[r] / static_cast<double>(acc[i].round_cells[r]));
      sum += acc[i].round_sum[r];
      cells += acc[i].round_cells[r];
    }
    row.overall = cells ? sum / static_cast<double>(cells) : 0.0;
    out.rows.push_back(std::move(row));
  }
  return out;
}

CsvTable OnlineSummary::by_round_table() const {
  CsvTable t{{"ranker", "query_agent", "agent", "kind", "round", "avg_rank"}, {}};
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.by_round.size(); ++i) {
      t.rows.push_back({r.ranker, r.query_agent, r.agent, std::string(to_string(r.kind)), std::to_string(i + 1),
                        num(r.by_round[i])});
    }
  }
  return t;
}

CsvTable OnlineSummary::overall_table() const {
  CsvTable t{{"ranker", "query_agent", "agent", "kind", "competitions", "avg_rank"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.ranker, r.query_agent, r.agent, std::string(to_string(r.kind)), std::to_string(r.competitions),
                      num(r.overall)});
  }
  return t;
}

CsvTable OnlineSummary::static_table() const {
  std::vector<std::string> qagents, rankers;
  std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    if (r.kind != AgentKind::static_agent) continue;
    index_of(qagents, r.query_agent);
    index_of(rankers, r.ranker);
    auto& a = acc[{r.query_agent, r.ranker}];
    a.first += r.overall;
    a.second += 1;
  }
  CsvTable t;
  t.columns.push_back("query_agent");
  for (const auto& r : rankers) t.columns.push_back(r);
  for (const auto& q : qagents) {
    std::vector<std::string> row{q};
    for (const auto& r : rankers) {
      auto it = acc.find({q, r});
      row.push_back(it == acc.end() ? "" : num(it->second.first / static_cast<double>(it->second.second)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace arena
