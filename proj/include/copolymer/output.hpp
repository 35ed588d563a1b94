#ifndef COPOLYMER_OUTPUT_HPP
#define COPOLYMER_OUTPUT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace copolymer {

using Cell = std::variant<double, long long, std::string>;

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string format_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

/// Column-named result table; one per command.
class Table
{
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<Cell> row)
    {
        if (row.size() != columns_.size())
            throw std::logic_error("Table::add: row has " + std::to_string(row.size()) + " cells, expected " +
                                   std::to_string(columns_.size()));
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    std::string to_csv() const
    {
        std::ostringstream out;
        out << "# schema=1\n";
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
        out << "\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::string s = format_cell(row[i]);
                if (s.find_first_of(",\"\n") != std::string::npos) {
                    std::string q = "\"";
                    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                    s = q + "\"";
                }
                out << (i ? "," : "") << s;
            }
            out << "\n";
        }
        return out.str();
    }

    // Numbers go through the same %.12g text as the CSV so both formats agree.
    std::string to_json() const
    {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (const auto* d = std::get_if<double>(&row[i])) {
                    if (std::isfinite(*d)) obj[columns_[i]] = nlohmann::ordered_json::parse(format_number(*d));
                    else obj[columns_[i]] = format_number(*d);
                } else if (const auto* n = std::get_if<long long>(&row[i])) {
                    obj[columns_[i]] = *n;
                } else {
                    obj[columns_[i]] = std::get<std::string>(row[i]);
                }
            }
            rows.push_back(std::move(obj));
        }
        nlohmann::ordered_json doc;
        doc["schema"] = 1;
        doc["columns"] = columns_;
        doc["rows"] = std::move(rows);
        return doc.dump(1) + "\n";
    }

    std::string render(const std::string& format) const
    {
        if (format == "csv") return to_csv();
        if (format == "json") return to_json();
        throw std::invalid_argument("unknown output format '" + format + "'");
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// Writes `<dir>/<stem>.<format>` in binary mode (LF endings); returns the path.
inline std::string write_table(const Table& table, const std::string& dir, const std::string& stem,
                               const std::string& format)
{
    std::filesystem::create_directories(dir);
    const auto path = (std::filesystem::path(dir) / (stem + "." + format)).string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << table.render(format);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
    return path;
}

}  // namespace copolymer

#endif  // COPOLYMER_OUTPUT_HPP
