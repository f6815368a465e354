#include "contam/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "contam/errors.hpp"

namespace contam {

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
    return std::string(buf.data(), end);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvField>& fields) {
    if (fields.size() != columns_) throw std::logic_error("CsvWriter: row arity mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        std::visit(
            [this](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    out_ << format_real(v);
                } else if constexpr (std::is_same_v<T, std::monostate>) {
                    // empty cell
                } else {
                    out_ << v;
                }
            },
            fields[i]);
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

namespace schema {

const CsvSchema& mean_oracle() {
    static const CsvSchema s{{"alpha", ColumnType::Real},
                             {"t", ColumnType::Integer},
                             {"factor_uniform", ColumnType::Real},
                             {"factor_hat", ColumnType::Real},
                             {"bound_lo", ColumnType::OptionalReal},
                             {"bound_hi", ColumnType::OptionalReal}};
    return s;
}

const CsvSchema& mean_mc() {
    static const CsvSchema s{{"alpha", ColumnType::Real},       {"scheme", ColumnType::Text},
                             {"t", ColumnType::Integer},        {"trace_var", ColumnType::Real},
                             {"stderr", ColumnType::Real},      {"replicates", ColumnType::Integer},
                             {"seed", ColumnType::Integer}};
    return s;
}

const CsvSchema& walk() {
    static const CsvSchema s{{"alpha", ColumnType::Real},
                             {"truncation", ColumnType::Integer},
                             {"replicates", ColumnType::Integer},
                             {"estimate", ColumnType::Real},
                             {"ci_halfwidth", ColumnType::Real}};
    return s;
}

const CsvSchema& pac() {
    static const CsvSchema s{{"learner", ColumnType::Text}, {"alpha", ColumnType::Real},
                             {"n", ColumnType::Integer},    {"t", ColumnType::Integer},
                             {"loss", ColumnType::Real},    {"replicate", ColumnType::Integer},
                             {"seed", ColumnType::Integer}};
    return s;
}

}  // namespace schema

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("no column named " + std::string(name));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parses_integer(const std::string& s) {
    if (s.empty()) return false;
    std::int64_t v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parses_real(const std::string& s) {
    if (s == "nan" || s == "inf" || s == "-inf") return true;
    if (s.empty()) return false;
    double v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split_line(line));
    }
    return table;
}

std::vector<std::string> validate_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::vector<std::string> problems;
    CsvTable table;
    try {
        table = read_csv(path);
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
        return problems;
    }
    if (table.header.size() != schema.size()) {
        problems.push_back(path.filename().string() + ": expected " + std::to_string(schema.size()) +
                           " columns, found " + std::to_string(table.header.size()));
        return problems;
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (table.header[c] != schema[c].name) {
            problems.push_back(path.filename().string() + ": column " + std::to_string(c) + " is '" +
                               table.header[c] + "', expected '" + schema[c].name + "'");
        }
    }
    if (!problems.empty()) return problems;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path.filename().string() + ":" + std::to_string(r + 2);
        if (row.size() != schema.size()) {
            problems.push_back(where + ": wrong number of cells");
            continue;
        }
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const auto& cell = row[c];
            bool ok = true;
            switch (schema[c].type) {
                case ColumnType::Real: ok = parses_real(cell); break;
                case ColumnType::OptionalReal: ok = cell.empty() || parses_real(cell); break;
                case ColumnType::Integer: ok = parses_integer(cell); break;
                case ColumnType::Text: ok = !cell.empty(); break;
            }
            if (!ok) problems.push_back(where + ": bad value '" + cell + "' in column " + schema[c].name);
        }
    }
    return problems;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace contam
