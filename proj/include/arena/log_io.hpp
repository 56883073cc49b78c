// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "arena/core.hpp"

namespace arena {

inline constexpr const char* kLogSchema = "arena-log/1";

// arena-log/1 is UTF-8 JSON lines: a "header" record, one "round" record per
// round, then an "end" record carrying completeness. Every record has
// "schema": "arena-log/1" and "record": <kind>.

void write_log(std::ostream& out, const CompetitionLog& log);
std::string log_to_string(const CompetitionLog& log);

/// Throws ArenaError(malformed_file) on schema or structure violations. A log
/// without an "end" record reads back as incomplete.
CompetitionLog read_log(std::istream& in);
CompetitionLog log_from_string(const std::string& text);

void save_log(const std::filesystem::path& path, const CompetitionLog& log);
CompetitionLog load_log(const std::filesystem::path& path);

}  // namespace arena
