// output.cpp: CSV and manifest writers

#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace qlevy::cli {

std::string format_number(double value)
{
    if (std::isnan(value)) return {};
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c > 0) out << ',';
        out << table.header[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << format_number(row[c]);
        }
        out << '\n';
    }
}

std::filesystem::path manifest_path(const std::filesystem::path& output)
{
    return output.string() + ".manifest.json";
}

void emit(const Table& table, const std::filesystem::path& path, nlohmann::json manifest)
{
    if (path.empty()) {
        write_csv(std::cout, table);
        return;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path.string());
        write_csv(out, table);
    }
    manifest["output"] = path.filename().string();
    manifest["columns"] = table.header;
    manifest["rows"] = table.rows.size();
    std::ofstream mf(manifest_path(path), std::ios::binary);
    if (!mf) throw std::runtime_error("cannot open " + manifest_path(path).string());
    mf << manifest.dump(2) << '\n';
}

} // namespace qlevy::cli
