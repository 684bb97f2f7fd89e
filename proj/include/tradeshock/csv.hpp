#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "tradeshock/error.hpp"

namespace tradeshock {

// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Strict double parse of a whole (trimmed) field.
inline double parse_double(std::string_view field, const std::string& where) {
    const std::string_view t = trim(field);
    double value = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw validation_error(where + ": not a number: '" + std::string(field) + "'");
    }
    return value;
}

inline long parse_long(std::string_view field, const std::string& where) {
    const std::string_view t = trim(field);
    long value = 0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw validation_error(where + ": not an integer: '" + std::string(field) + "'");
    }
    return value;
}

// Splits one CSV record. Supports double-quoted fields with "" escapes;
// multi-line quoted fields are not supported.
inline std::vector<std::string> split_csv_record(std::string_view line, const std::string& where) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            if (!current.empty()) {
                throw validation_error(where + ": quote inside unquoted field");
            }
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
        ++i;
    }
    if (in_quotes) {
        throw validation_error(where + ": unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row has header.size() fields
    std::vector<std::size_t> line_numbers;       // 1-based source line of each row
};

// Reads a CSV file with a mandatory header row; blank lines are skipped.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw validation_error(path + ": cannot open file");
    }
    CsvTable table;
    table.path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        auto fields = split_csv_record(line, where);
        if (table.header.empty()) {
            for (auto& f : fields) f = std::string(trim(f));
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw validation_error(where + ": expected " + std::to_string(table.header.size()) +
                                   " fields, got " + std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(lineno);
    }
    if (table.header.empty()) {
        throw validation_error(path + ": missing header row");
    }
    return table;
}

// Quotes a field only when it contains a comma, quote, or newline.
inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline std::string join_csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace tradeshock
