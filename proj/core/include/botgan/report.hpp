#pragma once

// Tabular reports as CSV (with '#' comment lines carrying seed and config)
// or JSON {"meta": ..., "columns": [...], "rows": [[...], ...]}.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace botgan::report {

enum class Format { csv, json };

Format format_from_string(std::string_view name);
std::string_view to_string(Format format) noexcept;

/// Empty cells (monostate) print as nothing in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

struct Meta {
    std::string command;
    std::uint64_t seed = 0;
    /// Serialized JSON object with the resolved configuration.
    std::string config_json = "{}";
};

/// Shortest text that parses back to the same double; inf/-inf/nan spelled out.
std::string format_double(double value);

void write_table(std::ostream& out, const Table& table, const Meta& meta, Format format);
void write_table(const std::filesystem::path& path, const Table& table, const Meta& meta,
                 Format format);

}  // namespace botgan::report
