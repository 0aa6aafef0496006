#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nonml::csv {

using Row = std::vector<std::string>;

/// Reads a comma-separated file. Fields are trimmed; double-quoted fields may
/// contain commas. Blank lines are skipped.
std::vector<Row> read(const std::filesystem::path& path);
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote or whitespace edge.
std::string escape(std::string_view field);

/// Shortest round-trip decimal form; NaN and infinities use the tokens
/// "NaN", "Inf" and "-Inf".
std::string format_number(double value);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace nonml::csv
