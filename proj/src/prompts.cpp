// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/prompts.hpp"

#include <fstream>
#include <sstream>

#include "arena/error.hpp"

namespace arena {

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tpl.size());
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    const char c = tpl[i];
    if (c == '{' && i + 1 < tpl.size() && tpl[i + 1] == '{') {
      out.push_back('{');
      ++i;
    } else if (c == '}' && i + 1 < tpl.size() && tpl[i + 1] == '}') {
      out.push_back('}');
      ++i;
    } else if (c == '{') {
      auto close = tpl.find('}', i);
      if (close == std::string_view::npos) fail(ErrorCode::config_error, "unterminated placeholder in template");
      const std::string name(tpl.substr(i + 1, close - i - 1));
      auto it = vars.find(name);
      if (it == vars.end()) fail(ErrorCode::config_error, "template placeholder {" + name + "} has no value");
      out += it->second;
      i = close;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string load_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::config_error, "cannot open prompt template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace prompts {

const char* const kRules =
    "The document must be plain text (no markup, no lists, no headings) and contain at most {max_terms} terms. "
    "It must remain a coherent, relevant answer to the query.";

const char* const kNoCopyClause =
    "Do not copy sentences or passages from the other documents; write in your own words.";

const char* const kStricterLength =
    "Your previous answer was too long. The document MUST contain at most {max_terms} terms.";

const char* const kDocumentRewrite =
    "You are a publisher competing in a search engine ranking competition. "
    "Rewrite your document so that it is ranked higher for the query in the next round.\n"
    "Rules: {rules}\n"
    "{no_copy_clause}\n"
    "Query: <query>{query}</query>\n"
    "Documents from the last round with their ranks:\n<competitors>{competitors}</competitors>\n"
    "Your current document:\n<document>{document}</document>\n"
    "Answer with the revised document only.";

const char* const kQueryVariations =
    "Here is a description of an information need.\n<backstory>{backstory}</backstory>\n"
    "Write <count>{count}</count> different search engine queries a person could issue for it. "
    "Return a plain list of queries, one per line, with no other text.";

const char* const kDoc2Query =
    "Generate search queries that this passage would answer.\n<backstory>{backstory}</backstory>\n"
    "Produce <count>{count}</count> queries. Return a plain list of queries, one per line.";

const char* const kRelevanceYesNo =
    "Passage: {document}\nQuery: {query}\n"
    "Does the passage answer the query? Answer Yes or No.";

}  // namespace prompts
}  // namespace arena
