#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace protmeas::io {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::string, double, long long>;

/// Column-oriented result table shared by the CSV, JSON and text writers.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// 12 significant digits in scientific notation ("%.11e").
std::string format_number(double value);
/// Value rounded to 12 significant digits (non-finite values pass through).
double round_significant(double value);

/// Header row plus one line per row, comma-separated, LF endings.
std::string to_csv(const Table& table);
/// Right-aligned columns separated by two spaces.
std::string to_text(const Table& table);
/// Array of row objects keyed by column name.
Json to_json_rows(const Table& table);
/// Copy with every floating-point number rounded to 12 significant digits;
/// non-finite numbers become null.
Json rounded(const Json& doc);
/// Two-space indented dump of `rounded(doc)` with a trailing newline.
std::string dump(const Json& doc);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace protmeas::io
