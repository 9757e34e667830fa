// output.hpp: CSV tables and run manifests for the qlevy tool

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qlevy::cli {

// Column-major-agnostic table; NaN cells are written as empty fields.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);

// Writes path and path.manifest.json; stdout (and no manifest) when path is empty.
void emit(const Table& table, const std::filesystem::path& path, nlohmann::json manifest);

std::filesystem::path manifest_path(const std::filesystem::path& output);

} // namespace qlevy::cli
