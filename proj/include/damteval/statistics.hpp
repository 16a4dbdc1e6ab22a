#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace damteval {

enum class KendallVariant { TauA, TauB };
enum class Direction { HigherBetter, LowerBetter };

/// Signed statistics; any of them may be undefined on a degenerate sample.
/// Absolute values are applied only when a report is rendered.
struct CorrelationResult {
    std::optional<double> pearson_r;
    std::optional<double> spearman_rho;
    std::optional<double> kendall_tau;
    std::size_t n = 0;
};

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
double kendall(std::span<const double> x, std::span<const double> y, KendallVariant variant = KendallVariant::TauA);

// 1-based ranks, tied values share their average rank.
std::vector<double> fractional_ranks(std::span<const double> x);

// Each statistic is computed independently; an undefined one stays empty.
CorrelationResult correlate(std::span<const double> x, std::span<const double> y,
                            KendallVariant variant = KendallVariant::TauA);

using ScoreMap = std::map<std::string, double>;

/// Either a fraction of the systems (floor(K * fraction)) or an explicit count.
struct TopKSelection {
    std::optional<double> fraction;
    std::optional<std::size_t> k;

    static TopKSelection of_fraction(double f) { return {f, std::nullopt}; }
    static TopKSelection of_count(std::size_t k) { return {std::nullopt, k}; }
};

std::size_t resolve_top_k(std::size_t total, const TopKSelection& selection);

// Best-first by human score; equal scores ordered by name.
std::vector<std::string> top_k_select(const ScoreMap& human_scores, const TopKSelection& selection);

struct SweepPoint {
    std::size_t k = 0;
    CorrelationResult result;
};

std::vector<SweepPoint> top_k_sweep(const ScoreMap& metric_scores, const ScoreMap& human_scores, std::size_t k_min,
                                    std::size_t k_max, KendallVariant variant = KendallVariant::TauA);

// Metric and human vectors restricted to `systems`, in that order.
CorrelationResult correlate_subset(const ScoreMap& metric_scores, const ScoreMap& human_scores,
                                   const std::vector<std::string>& systems,
                                   KendallVariant variant = KendallVariant::TauA);

struct RankEntry {
    std::string system;
    double metric_score = 0.0;
    double human_score = 0.0;
    int metric_rank = 0;
    int human_rank = 0;
    int delta = 0;  // metric_rank - human_rank; positive = metric ranks it worse
};

struct RankReport {
    // Ordered by human rank.
    std::vector<RankEntry> entries;
    int sum_abs_delta = 0;
    // Groups of systems with equal scores, resolved by name.
    std::vector<std::vector<std::string>> metric_ties;
    std::vector<std::vector<std::string>> human_ties;
};

// Throws ConfigError when the two maps cover different systems.
void require_same_systems(const ScoreMap& a, const ScoreMap& b, const std::string& what);

RankReport rank_report(const ScoreMap& metric_scores, const ScoreMap& human_scores,
                       Direction direction = Direction::HigherBetter);

}  // namespace damteval
