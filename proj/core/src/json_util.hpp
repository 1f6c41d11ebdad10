// Internal helpers shared by the JSON-backed loaders. Not installed.
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace chaineval::detail {

// Whole-file read. Throws IoError when the file is missing or unreadable.
std::string read_file(const std::filesystem::path& path);

// Write with parent-directory creation. Throws IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& bytes);

// Parse with a path-qualified ParseError on bad JSON.
nlohmann::json parse_json_file(const std::filesystem::path& path);

nlohmann::json parse_json_text(const std::string& text,
                               const std::string& origin);

// Current UTC time as ISO-8601 ("2026-08-10T12:00:00Z").
std::string now_iso8601_utc();

}  // namespace chaineval::detail
