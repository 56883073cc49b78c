// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/log_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "arena/error.hpp"

namespace arena {

using json = nlohmann::json;

namespace {

json agent_to_json(const AgentId& a) {
  return {{"kind", to_string(a.kind)}, {"model_tag", a.model_tag}, {"params_digest", a.params_digest}};
}

AgentId agent_from_json(const json& j) {
  return AgentId{parse_agent_kind(j.at("kind").get<std::string>()), j.at("model_tag").get<std::string>(),
                 j.at("params_digest").get<std::string>()};
}

json document_to_json(const Document& d) {
  return {{"id", d.id},
          {"topic_id", d.topic_id},
          {"author", agent_to_json(d.author)},
          {"text", d.text},
          {"round_created", d.round_created}};
}

Document document_from_json(const json& j) {
  return Document{j.at("id").get<std::string>(), j.at("topic_id").get<std::string>(),
                  agent_from_json(j.at("author")), j.at("text").get<std::string>(),
                  j.at("round_created").get<int>()};
}

json ranking_to_json(const RankedList& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"doc_id", e.doc_id}, {"score", e.score}});
  return {{"query_id", r.query_id}, {"round", r.round}, {"entries", std::move(entries)}};
}

RankedList ranking_from_json(const json& j) {
  RankedList r;
  r.query_id = j.at("query_id").get<std::string>();
  r.round = j.at("round").get<int>();
  for (const auto& e : j.at("entries")) {
    r.entries.push_back({e.at("doc_id").get<std::string>(), e.at("score").get<double>()});
  }
  return r;
}

json proposal_to_json(const std::optional<ModificationProposal>& p) {
  if (!p) return nullptr;
  return {{"source_sentence_index", p->source_sentence_index},
          {"target_sentence", p->target_sentence},
          {"score", p->score},
          {"provenance", p->provenance}};
}

std::optional<ModificationProposal> proposal_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return ModificationProposal{j.at("source_sentence_index").get<int>(),
                              j.at("target_sentence").get<std::string>(), j.at("score").get<double>(),
                              j.at("provenance").get<std::string>()};
}

json record(const char* kind) { return {{"schema", kLogSchema}, {"record", kind}}; }

}  // namespace

void write_log(std::ostream& out, const CompetitionLog& log) {
  json header = record("header");
  header["topic_id"] = log.topic_id;
  header["seed"] = log.seed;
  header["labels"] = log.labels;
  json queries = json::array();
  for (const auto& q : log.queries) {
    queries.push_back({{"id", q.id}, {"topic_id", q.topic_id}, {"text", q.text}, {"origin", agent_to_json(q.origin)}});
  }
  header["queries"] = std::move(queries);
  json participants = json::array();
  for (const auto& p : log.participants) {
    participants.push_back({{"slot", p.slot}, {"agent", agent_to_json(p.agent)}});
  }
  header["participants"] = std::move(participants);
  out << header.dump() << '\n';

  for (const auto& r : log.rounds) {
    json rec = record("round");
    rec["index"] = r.index;
    json rankings = json::array();
    for (const auto& rl : r.rankings) rankings.push_back(ranking_to_json(rl));
    rec["rankings"] = std::move(rankings);
    json docs = json::object();
    for (const auto& [slot, d] : r.documents) docs[slot] = document_to_json(d);
    rec["documents"] = std::move(docs);
    json props = json::object();
    for (const auto& [slot, p] : r.proposals) props[slot] = proposal_to_json(p);
    rec["proposals"] = std::move(props);
    out << rec.dump() << '\n';
  }

  json end = record("end");
  end["complete"] = log.complete;
  end["error"] = log.error;
  end["rounds"] = log.rounds.size();
  out << end.dump() << '\n';
}

std::string log_to_string(const CompetitionLog& log) {
  std::ostringstream out;
  write_log(out, log);
  return out.str();
}

CompetitionLog read_log(std::istream& in) {
  CompetitionLog log;
  std::string line;
  bool seen_header = false;
  bool seen_end = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "log line " + std::to_string(line_no);
    if (seen_end) fail(ErrorCode::malformed_file, where + ": record after end");
    try {
      json j = json::parse(line);
      if (j.at("schema").get<std::string>() != kLogSchema) {
        fail(ErrorCode::malformed_file, where + ": unsupported schema " + j.at("schema").dump());
      }
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "header") {
        if (seen_header) fail(ErrorCode::malformed_file, where + ": duplicate header");
        seen_header = true;
        log.topic_id = j.at("topic_id").get<std::string>();
        log.seed = j.at("seed").get<std::uint64_t>();
        log.labels = j.at("labels").get<std::map<std::string, std::string>>();
        for (const auto& q : j.at("queries")) {
          log.queries.push_back(Query{q.at("id").get<std::string>(), q.at("topic_id").get<std::string>(),
                                      q.at("text").get<std::string>(), agent_from_json(q.at("origin"))});
        }
        for (const auto& p : j.at("participants")) {
          log.participants.push_back(Participant{p.at("slot").get<std::string>(), agent_from_json(p.at("agent"))});
        }
      } else if (kind == "round") {
        if (!seen_header) fail(ErrorCode::malformed_file, where + ": round before header");
        RoundRecord r;
        r.index = j.at("index").get<int>();
        if (r.index != static_cast<int>(log.rounds.size()) + 1) {
          fail(ErrorCode::malformed_file, where + ": round indices must be contiguous from 1");
        }
        for (const auto& rl : j.at("rankings")) r.rankings.push_back(ranking_from_json(rl));
        for (const auto& [slot, d] : j.at("documents").items()) r.documents.emplace(slot, document_from_json(d));
        for (const auto& [slot, p] : j.at("proposals").items()) r.proposals.emplace(slot, proposal_from_json(p));
        log.rounds.push_back(std::move(r));
      } else if (kind == "end") {
        seen_end = true;
        log.complete = j.at("complete").get<bool>();
        log.error = j.at("error").get<std::string>();
      } else {
        fail(ErrorCode::malformed_file, where + ": unknown record kind " + kind);
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::malformed_file, where + ": " + e.what());
    }
  }
  if (!seen_header) fail(ErrorCode::malformed_file, "log has no header record");
  if (!seen_end) log.complete = false;
  return log;
}

CompetitionLog log_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_log(in);
}

void save_log(const std::filesystem::path& path, const CompetitionLog& log) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::malformed_file, "cannot write " + path.string());
  write_log(out, log);
}

CompetitionLog load_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::malformed_file, "cannot open " + path.string());
  return read_log(in);
}

}  // namespace arena
