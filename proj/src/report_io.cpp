#include "protmeas/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "protmeas/errors.hpp"

namespace protmeas::io {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ValidationError("table row has the wrong number of cells");
    rows.push_back(std::move(row));
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", value == 0.0 ? 0.0 : value);
    return buf;
}

double round_significant(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(format_number(value).c_str(), nullptr);
}

namespace {

std::string cell_text(const Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    return std::to_string(std::get<long long>(cell));
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (j) out += ',';
        out += csv_escape(table.columns[j]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += csv_escape(cell_text(row[j]));
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const Table& table) {
    std::vector<std::size_t> width(table.columns.size());
    for (std::size_t j = 0; j < table.columns.size(); ++j) width[j] = table.columns[j].size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : table.rows) {
        std::vector<std::string> line;
        for (std::size_t j = 0; j < row.size(); ++j) {
            line.push_back(cell_text(row[j]));
            width[j] = std::max(width[j], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
        std::string out;
        for (std::size_t j = 0; j < line.size(); ++j) {
            if (j) out += "  ";
            out += std::string(width[j] - line[j].size(), ' ') + line[j];
        }
        return out + '\n';
    };
    std::string out = emit(table.columns);
    for (const auto& line : cells) out += emit(line);
    return out;
}

Json to_json_rows(const Table& table) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json obj = Json::object();
        for (std::size_t j = 0; j < row.size(); ++j) {
            const auto& cell = row[j];
            if (const auto* s = std::get_if<std::string>(&cell)) obj[table.columns[j]] = *s;
            else if (const auto* d = std::get_if<double>(&cell)) obj[table.columns[j]] = *d;
            else obj[table.columns[j]] = std::get<long long>(cell);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

Json rounded(const Json& doc) {
    if (doc.is_number_float()) {
        const double v = doc.get<double>();
        if (!std::isfinite(v)) return nullptr;
        return round_significant(v);
    }
    if (doc.is_array()) {
        Json out = Json::array();
        for (const auto& item : doc) out.push_back(rounded(item));
        return out;
    }
    if (doc.is_object()) {
        Json out = Json::object();
        for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = rounded(it.value());
        return out;
    }
    return doc;
}

std::string dump(const Json& doc) { return rounded(doc).dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace protmeas::io
