#include "botgan/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "botgan/error.hpp"
#include "json.hpp"

namespace botgan::report {

Format format_from_string(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw ConfigError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

std::string_view to_string(Format format) noexcept {
    return format == Format::csv ? "csv" : "json";
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw ShapeError("report row has " + std::to_string(row.size()) + " cells for " +
                         std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string csv_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return "";
            else if constexpr (std::is_same_v<V, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<V, double>) return format_double(v);
            else return csv_escape(v);
        },
        cell);
}

nlohmann::json json_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<V, double>) {
                if (std::isfinite(v)) return v;
                return format_double(v);
            } else return v;
        },
        cell);
}

nlohmann::json parse_config(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report config is not valid JSON: ") + e.what());
    }
}

}  // namespace

void write_table(std::ostream& out, const Table& table, const Meta& meta, Format format) {
    const auto config = parse_config(meta.config_json);
    if (format == Format::csv) {
        out << "# command: " << meta.command << '\n';
        out << "# seed: " << meta.seed << '\n';
        out << "# config: " << config.dump() << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << csv_escape(table.columns[c]);
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
            out << '\n';
        }
        return;
    }
    nlohmann::json doc;
    doc["meta"] = {{"command", meta.command}, {"seed", meta.seed}, {"config", config}};
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
        auto jr = nlohmann::json::array();
        for (const auto& cell : row) jr.push_back(json_cell(cell));
        doc["rows"].push_back(std::move(jr));
    }
    out << doc.dump(2) << '\n';
}

void write_table(const std::filesystem::path& path, const Table& table, const Meta& meta,
                 Format format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_table(out, table, meta, format);
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

}  // namespace botgan::report
