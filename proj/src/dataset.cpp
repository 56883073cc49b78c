// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/dataset.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "arena/error.hpp"
#include "arena/textproc.hpp"

namespace arena {

using json = nlohmann::json;

const Topic* Dataset::find_topic(std::string_view id) const {
  for (const auto& t : topics) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<Query> Dataset::queries_of(std::string_view topic_id) const {
  std::vector<Query> out;
  for (const auto& q : queries) {
    if (q.topic_id == topic_id) out.push_back(q);
  }
  return out;
}

std::vector<Document> Dataset::documents_of(std::string_view topic_id, int round) const {
  std::vector<Document> out;
  for (const auto& d : documents) {
    if (d.topic_id == topic_id && (round < 0 || d.round_created == round)) out.push_back(d);
  }
  return out;
}

int Dataset::last_round(std::string_view topic_id) const {
  int r = 0;
  for (const auto& d : documents) {
    if (d.topic_id == topic_id) r = std::max(r, d.round_created);
  }
  return r;
}

namespace {

struct Rejected {
  std::string reason;
};

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Rejected{std::string("missing_field:") + name};
  return *it;
}

std::string str_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw Rejected{std::string("bad_field:") + name};
  return v.get<std::string>();
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) throw Rejected{std::string("bad_field:") + name};
  return v.get<int>();
}

AgentId agent_from(const json& j) {
  if (!j.is_object()) throw Rejected{"bad_field:author"};
  try {
    return {parse_agent_kind(str_field(j, "kind")), j.value("model_tag", ""), j.value("params_digest", "")};
  } catch (const ArenaError&) {
    throw Rejected{"unknown_agent_kind"};
  }
}

json agent_to(const AgentId& a) {
  return {{"kind", to_string(a.kind)}, {"model_tag", a.model_tag}, {"params_digest", a.params_digest}};
}

}  // namespace

IngestResult ingest_dataset_text(std::string_view text, std::string_view format, int max_terms) {
  if (format != kDatasetFormat) fail(ErrorCode::config_error, "unknown dataset format '" + std::string(format) + "'");
  struct Line {
    std::size_t no;
    std::string raw;
    json value;
  };
  std::vector<Line> topics, queries, documents, judgments;
  IngestResult out;
  auto reject = [&](std::size_t no, std::string reason, std::string raw) {
    out.rejects.push_back({no, std::move(reason), std::move(raw)});
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      reject(no, "malformed_json", raw);
      continue;
    }
    const std::string type = j.value("type", "");
    if (type == "topic") topics.push_back({no, raw, std::move(j)});
    else if (type == "query") queries.push_back({no, raw, std::move(j)});
    else if (type == "document") documents.push_back({no, raw, std::move(j)});
    else if (type == "judgment") judgments.push_back({no, raw, std::move(j)});
    else reject(no, "unknown_type", raw);
  }

  Dataset& data = out.data;
  std::set<std::string> topic_ids, query_ids, doc_ids;
  for (auto& l : topics) {
    try {
      Topic t{str_field(l.value, "id"), str_field(l.value, "backstory"), {}};
      if (t.id.empty()) throw Rejected{"empty_id"};
      if (tokenize(t.backstory).empty()) throw Rejected{"empty_backstory"};
      if (!topic_ids.insert(t.id).second) throw Rejected{"duplicate_id"};
      data.topics.push_back(std::move(t));
    } catch (const Rejected& r) {
      reject(l.no, r.reason, l.raw);
    }
  }
  for (auto& l : queries) {
    try {
      Query q{str_field(l.value, "id"), str_field(l.value, "topic_id"), str_field(l.value, "text"),
              AgentId{AgentKind::human, "", ""}};
      if (l.value.contains("origin")) q.origin = agent_from(l.value["origin"]);
      if (!topic_ids.contains(q.topic_id)) throw Rejected{"missing_topic"};
      if (tokenize(q.text).empty()) throw Rejected{"empty_query"};
      if (q.id.empty() || topic_ids.contains(q.id) || !query_ids.insert(q.id).second) throw Rejected{"duplicate_id"};
      data.queries.push_back(std::move(q));
    } catch (const Rejected& r) {
      reject(l.no, r.reason, l.raw);
    }
  }
  for (auto& l : documents) {
    try {
      Document d;
      d.id = str_field(l.value, "id");
      d.topic_id = str_field(l.value, "topic_id");
      d.text = str_field(l.value, "text");
      if (l.value.contains("author")) {
        d.author = agent_from(l.value["author"]);
      } else {
        try {
          d.author = {parse_agent_kind(str_field(l.value, "author_kind")), "", ""};
        } catch (const ArenaError&) {
          throw Rejected{"unknown_agent_kind"};
        }
      }
      d.round_created = l.value.contains("round") ? int_field(l.value, "round") : 1;
      if (d.round_created < 0) throw Rejected{"bad_field:round"};
      if (!topic_ids.contains(d.topic_id)) throw Rejected{"missing_topic"};
      const auto check = validate_document(d, max_terms);
      if (!check.ok()) throw Rejected{check.violations.front()};
      if (d.id.empty() || !doc_ids.insert(d.id).second) throw Rejected{"duplicate_id"};
      data.documents.push_back(std::move(d));
    } catch (const Rejected& r) {
      reject(l.no, r.reason, l.raw);
    }
  }
  for (auto& l : judgments) {
    try {
      Judgment jd{str_field(l.value, "query_id"), str_field(l.value, "doc_id"), int_field(l.value, "grade")};
      if (jd.grade < 0) throw Rejected{"negative_grade"};
      if (!doc_ids.contains(jd.doc_id)) throw Rejected{"unknown_document"};
      if (!query_ids.contains(jd.query_id) && !topic_ids.contains(jd.query_id)) throw Rejected{"unknown_query"};
      apply_judgments(data, std::span<const Judgment>(&jd, 1));
    } catch (const Rejected& r) {
      reject(l.no, r.reason, l.raw);
    }
  }
  std::sort(out.rejects.begin(), out.rejects.end(),
            [](const RejectedRecord& a, const RejectedRecord& b) { return a.line < b.line; });
  return out;
}

IngestResult ingest_dataset(const std::filesystem::path& path, std::string_view format, int max_terms) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::malformed_file, "cannot read dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_dataset_text(buf.str(), format, max_terms);
}

std::string dataset_to_string(const Dataset& data) {
  std::ostringstream out;
  for (const auto& t : data.topics) {
    out << json{{"type", "topic"}, {"id", t.id}, {"backstory", t.backstory}}.dump() << '\n';
  }
  for (const auto& q : data.queries) {
    out << json{{"type", "query"}, {"id", q.id}, {"topic_id", q.topic_id}, {"text", q.text}, {"origin", agent_to(q.origin)}}
               .dump()
        << '\n';
  }
  for (const auto& d : data.documents) {
    out << json{{"type", "document"}, {"id", d.id},           {"topic_id", d.topic_id}, {"author", agent_to(d.author)},
                {"text", d.text},     {"round", d.round_created}}
               .dump()
        << '\n';
  }
  for (const auto& t : data.topics) {
    for (const auto& [qid, grades] : t.judgments) {
      for (const auto& [doc, grade] : grades) {
        out << json{{"type", "judgment"}, {"query_id", qid}, {"doc_id", doc}, {"grade", grade}}.dump() << '\n';
      }
    }
  }
  return out.str();
}

void export_dataset(const std::filesystem::path& path, const Dataset& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::malformed_file, "cannot write dataset " + path.string());
  out << dataset_to_string(data);
}

void write_rejects(const std::filesystem::path& path, std::span<const RejectedRecord> rejects) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::malformed_file, "cannot write rejects file " + path.string());
  for (const auto& r : rejects) {
    out << json{{"line", r.line}, {"reason", r.reason}, {"raw", r.raw}}.dump(-1, ' ', false, json::error_handler_t::replace)
        << '\n';
  }
}

std::vector<Judgment> load_judgments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::malformed_file, "cannot read judgments " + path.string());
  std::vector<Judgment> out;
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(raw, nullptr, false);
    const auto where = path.string() + ":" + std::to_string(no);
    if (j.is_discarded() || !j.is_object()) fail(ErrorCode::malformed_file, where + ": not a JSON object");
    try {
      Judgment jd{str_field(j, "query_id"), str_field(j, "doc_id"), int_field(j, "grade")};
      if (jd.grade < 0) throw Rejected{"negative_grade"};
      out.push_back(std::move(jd));
    } catch (const Rejected& r) {
      fail(ErrorCode::malformed_file, where + ": " + r.reason);
    }
  }
  return out;
}

void apply_judgments(Dataset& data, std::span<const Judgment> judgments) {
  for (const auto& jd : judgments) {
    std::string topic_id;
    if (data.find_topic(jd.query_id) != nullptr) {
      topic_id = jd.query_id;
    } else {
      for (const auto& q : data.queries) {
        if (q.id == jd.query_id) topic_id = q.topic_id;
      }
    }
    if (topic_id.empty()) fail(ErrorCode::missing_topic, "judgment for unknown query " + jd.query_id);
    for (auto& t : data.topics) {
      if (t.id == topic_id) t.judgments[jd.query_id][jd.doc_id] = jd.grade;
    }
  }
}

}  // namespace arena
