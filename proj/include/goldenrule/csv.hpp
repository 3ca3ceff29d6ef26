#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace goldenrule::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    // Index of a named column; throws DomainError if absent.
    std::size_t index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

// Numeric CSV with one header row. Lines starting with '#' are comments.
Table parse(std::istream& in);
Table read(const std::filesystem::path& path);

// Round-trip formatting (17 significant digits).
std::string number(double x);

// Render a table; each comment line is emitted as "# <line>" before the header.
std::string render(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& comments = {});

// Write to a sibling temp file, then rename over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace goldenrule::csv
