#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "damteval/statistics.hpp"

namespace damteval {

// Fixed 6-decimal rendering; negative zero prints as "0.000000".
std::string format_fixed(double value);

// Value rounded to the same 6 decimals, for JSON payloads.
double round6(double value);

// Backslash-escapes tab, newline and backslash so a token fits a TSV cell.
std::string escape_tsv(const std::string& cell);

/// Metric-score table: header `system<TAB>metric1<TAB>metric2...`, one row per
/// system. This is the TSV that `damteval score` writes.
struct ScoreTable {
    std::vector<std::string> metrics;
    std::map<std::string, ScoreMap> columns;  // metric -> system -> score

    const ScoreMap& column(const std::string& metric) const;
};

ScoreTable read_score_table(const std::filesystem::path& path);

}  // namespace damteval
