#include "goldenrule/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "goldenrule/errors.hpp"

namespace goldenrule::csv {
namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::size_t Table::index(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw DomainError("csv: missing column '" + name + "'");
}

std::vector<double> Table::column(const std::string& name) const
{
    const auto k = index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

Table parse(std::istream& in)
{
    Table t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto cells = split(s);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw DomainError("csv: line " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " fields, expected " +
                              std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            double v = 0.0;
            const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || p != c.data() + c.size())
                throw DomainError("csv: line " + std::to_string(lineno) + ": not a number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw DomainError("csv: no header row");
    return t;
}

Table read(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("csv: cannot open " + path.string());
    return parse(in);
}

std::string number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& comments)
{
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ",";
            out += number(r[i]);
        }
        out += "\n";
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw DomainError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace goldenrule::csv
