#include "damteval/report.hpp"

#include <charconv>
#include <cstdio>
#include <set>

#include "damteval/corpus.hpp"
#include "damteval/errors.hpp"

namespace damteval {

std::string format_fixed(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

double round6(double value) { return std::stod(format_fixed(value)); }

std::string escape_tsv(const std::string& cell) {
    std::string out;
    out.reserve(cell.size());
    for (char c : cell) {
        switch (c) {
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\\': out += "\\\\"; break;
            default: out += c;
        }
    }
    return out;
}

const ScoreMap& ScoreTable::column(const std::string& metric) const {
    const auto it = columns.find(metric);
    if (it == columns.end()) fail(ErrorCode::ConfigError, "no metric column named '" + metric + "'");
    return it->second;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') cells.back().pop_back();
    return cells;
}

}  // namespace

ScoreTable read_score_table(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    const std::string src = path.string();
    if (lines.empty()) fail(ErrorCode::ParseError, src + ": empty score table");
    const auto header = split_tabs(lines[0]);
    if (header.size() < 2) fail(ErrorCode::ParseError, src + ":1: header needs a system column and at least one metric");
    ScoreTable table;
    std::set<std::string> seen_metrics;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty() || !seen_metrics.insert(header[c]).second) {
            fail(ErrorCode::ParseError, src + ":1: empty or duplicate metric name '" + header[c] + "'");
        }
        table.metrics.push_back(header[c]);
        table.columns[header[c]];
    }
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = src + ":" + std::to_string(n + 1);
        const auto cells = split_tabs(lines[n]);
        if (cells.size() != header.size()) {
            fail(ErrorCode::ParseError, where + ": expected " + std::to_string(header.size()) + " columns, got " +
                                            std::to_string(cells.size()));
        }
        const std::string& system = cells[0];
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            const auto& cell = cells[c];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
                fail(ErrorCode::ParseError, where + ": cannot parse score '" + cell + "' for metric " + header[c]);
            }
            if (!table.columns[header[c]].emplace(system, v).second) {
                fail(ErrorCode::ConfigError, where + ": duplicate system '" + system + "'");
            }
        }
    }
    return table;
}

}  // namespace damteval
