#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace contam {

/// 17 significant digits, "." decimal point, independent of the global locale.
std::string format_real(double value);

using CsvField = std::variant<std::string, std::int64_t, double, std::monostate>;

/// Comma-separated writer with a header row; std::monostate writes an empty cell.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(const std::vector<CsvField>& fields);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

enum class ColumnType { Real, OptionalReal, Integer, Text };

struct ColumnSpec {
    std::string name;
    ColumnType type;
};

using CsvSchema = std::vector<ColumnSpec>;

namespace schema {
const CsvSchema& mean_oracle();
const CsvSchema& mean_mc();
const CsvSchema& walk();
const CsvSchema& pac();
}  // namespace schema

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Empty on success, otherwise one message per problem (column names, arity, cell types).
std::vector<std::string> validate_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace contam
