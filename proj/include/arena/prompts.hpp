// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace arena {

/// Replaces {name} placeholders. Throws ArenaError(config_error) for a
/// placeholder with no value; "{{" and "}}" escape literal braces.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars);

std::string load_template(const std::filesystem::path& path);

namespace prompts {

// Placeholders: {query} {document} {competitors} {rules} {no_copy_clause}.
extern const char* const kDocumentRewrite;
// Placeholder: {max_terms}.
extern const char* const kRules;
extern const char* const kStricterLength;
extern const char* const kNoCopyClause;

// Placeholders: {backstory} {count}.
extern const char* const kQueryVariations;
extern const char* const kDoc2Query;

// Placeholders: {query} {document}.
extern const char* const kRelevanceYesNo;

}  // namespace prompts
}  // namespace arena
