#include "damteval/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "damteval/errors.hpp"

namespace damteval {

namespace {

void require_pair(std::span<const double> x, std::span<const double> y, const char* what) {
    if (x.size() != y.size()) {
        fail(ErrorCode::AlignmentError, std::string(what) + ": samples of length " + std::to_string(x.size()) +
                                            " and " + std::to_string(y.size()));
    }
    if (x.size() < 2) fail(ErrorCode::UndefinedCorrelation, std::string(what) + ": needs at least 2 samples");
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

int sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y, "pearson");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) fail(ErrorCode::UndefinedCorrelation, "pearson: constant sample");
    return clamp_unit(sxy / std::sqrt(sxx * syy));
}

std::vector<double> fractional_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        // positions i..j (0-based) share rank mean((i+1)..(j+1))
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y, "spearman");
    const auto rx = fractional_ranks(x);
    const auto ry = fractional_ranks(y);
    try {
        return pearson(rx, ry);
    } catch (const Error&) {
        fail(ErrorCode::UndefinedCorrelation, "spearman: all values tied");
    }
}

double kendall(std::span<const double> x, std::span<const double> y, KendallVariant variant) {
    require_pair(x, y, "kendall");
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int sx = sign(x[i] - x[j]);
            const int sy = sign(y[i] - y[j]);
            if (sx == 0) ++ties_x;
            if (sy == 0) ++ties_y;
            const int s = sx * sy;
            if (s > 0) ++concordant;
            if (s < 0) ++discordant;
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double diff = static_cast<double>(concordant - discordant);
    if (variant == KendallVariant::TauA) return diff / pairs;
    const double denom = std::sqrt((pairs - static_cast<double>(ties_x)) * (pairs - static_cast<double>(ties_y)));
    if (denom == 0.0) fail(ErrorCode::UndefinedCorrelation, "kendall tau-b: a sample is entirely tied");
    return clamp_unit(diff / denom);
}

CorrelationResult correlate(std::span<const double> x, std::span<const double> y, KendallVariant variant) {
    if (x.size() != y.size()) {
        fail(ErrorCode::AlignmentError, "correlate: samples of length " + std::to_string(x.size()) + " and " +
                                            std::to_string(y.size()));
    }
    CorrelationResult r;
    r.n = x.size();
    auto attempt = [](auto&& fn) -> std::optional<double> {
        try {
            return fn();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UndefinedCorrelation) throw;
            return std::nullopt;
        }
    };
    r.pearson_r = attempt([&] { return pearson(x, y); });
    r.spearman_rho = attempt([&] { return spearman(x, y); });
    r.kendall_tau = attempt([&] { return kendall(x, y, variant); });
    return r;
}

std::size_t resolve_top_k(std::size_t total, const TopKSelection& selection) {
    std::size_t k = 0;
    if (selection.fraction) {
        const double f = *selection.fraction;
        if (!(f > 0.0 && f <= 1.0)) fail(ErrorCode::ConfigError, "top-K fraction must lie in (0, 1]");
        // Slack keeps e.g. 10 * 0.3 = 3.0000000000000004 and 20 * 0.35 from
        // landing one below the intended integer.
        k = static_cast<std::size_t>(std::floor(static_cast<double>(total) * f + 1e-9));
    } else if (selection.k) {
        k = *selection.k;
    } else {
        k = total;
    }
    if (k < 2) {
        fail(ErrorCode::InsufficientSystems, "top-K selection yields " + std::to_string(k) +
                                                 " systems; at least 2 are required");
    }
    if (k > total) {
        fail(ErrorCode::InsufficientSystems, "top-K selection asks for " + std::to_string(k) + " systems, only " +
                                                 std::to_string(total) + " available");
    }
    return k;
}

std::vector<std::string> top_k_select(const ScoreMap& human_scores, const TopKSelection& selection) {
    const std::size_t k = resolve_top_k(human_scores.size(), selection);
    std::vector<std::pair<std::string, double>> ordered(human_scores.begin(), human_scores.end());
    // std::map iteration is name-ascending, so stable_sort resolves ties by name.
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(ordered[i].first);
    return out;
}

void require_same_systems(const ScoreMap& a, const ScoreMap& b, const std::string& what) {
    std::vector<std::string> only_a, only_b;
    for (const auto& [name, _] : a) {
        if (!b.count(name)) only_a.push_back(name);
    }
    for (const auto& [name, _] : b) {
        if (!a.count(name)) only_b.push_back(name);
    }
    if (only_a.empty() && only_b.empty()) return;
    std::string msg = what + ": system sets differ;";
    auto list = [&](const char* label, const std::vector<std::string>& xs) {
        if (xs.empty()) return;
        msg += std::string(" ") + label + ":";
        for (const auto& x : xs) msg += " " + x;
    };
    list("only in metric scores", only_a);
    list("only in human scores", only_b);
    fail(ErrorCode::ConfigError, msg);
}

CorrelationResult correlate_subset(const ScoreMap& metric_scores, const ScoreMap& human_scores,
                                   const std::vector<std::string>& systems, KendallVariant variant) {
    std::vector<double> m, h;
    m.reserve(systems.size());
    h.reserve(systems.size());
    for (const auto& s : systems) {
        const auto mi = metric_scores.find(s);
        const auto hi = human_scores.find(s);
        if (mi == metric_scores.end() || hi == human_scores.end()) {
            fail(ErrorCode::ConfigError, "system '" + s + "' lacks a metric or human score");
        }
        m.push_back(mi->second);
        h.push_back(hi->second);
    }
    return correlate(m, h, variant);
}

std::vector<SweepPoint> top_k_sweep(const ScoreMap& metric_scores, const ScoreMap& human_scores, std::size_t k_min,
                                    std::size_t k_max, KendallVariant variant) {
    require_same_systems(metric_scores, human_scores, "top-K sweep");
    if (k_min < 2) fail(ErrorCode::InsufficientSystems, "top-K sweep: k must be at least 2");
    if (k_max > human_scores.size()) {
        fail(ErrorCode::InsufficientSystems, "top-K sweep: k_max " + std::to_string(k_max) + " exceeds " +
                                                 std::to_string(human_scores.size()) + " systems");
    }
    if (k_min > k_max) fail(ErrorCode::ConfigError, "top-K sweep: k_min exceeds k_max");
    std::vector<SweepPoint> out;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const auto subset = top_k_select(human_scores, TopKSelection::of_count(k));
        out.push_back({k, correlate_subset(metric_scores, human_scores, subset, variant)});
    }
    return out;
}

namespace {

// 1 = best. Returns rank per system plus groups of tied systems.
std::map<std::string, int> assign_ranks(const ScoreMap& scores, Direction direction,
                                        std::vector<std::vector<std::string>>& ties) {
    std::vector<std::pair<std::string, double>> ordered(scores.begin(), scores.end());
    std::stable_sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
        return direction == Direction::HigherBetter ? a.second > b.second : a.second < b.second;
    });
    std::map<std::string, int> ranks;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        ranks[ordered[i].first] = static_cast<int>(i + 1);
        if (i > 0 && ordered[i].second == ordered[i - 1].second) {
            if (ties.empty() || ties.back().back() != ordered[i - 1].first) ties.push_back({ordered[i - 1].first});
            ties.back().push_back(ordered[i].first);
        }
    }
    return ranks;
}

}  // namespace

RankReport rank_report(const ScoreMap& metric_scores, const ScoreMap& human_scores, Direction direction) {
    require_same_systems(metric_scores, human_scores, "rank report");
    RankReport report;
    const auto metric_ranks = assign_ranks(metric_scores, direction, report.metric_ties);
    const auto human_ranks = assign_ranks(human_scores, Direction::HigherBetter, report.human_ties);
    for (const auto& [name, human_rank] : human_ranks) {
        RankEntry e;
        e.system = name;
        e.metric_score = metric_scores.at(name);
        e.human_score = human_scores.at(name);
        e.metric_rank = metric_ranks.at(name);
        e.human_rank = human_rank;
        e.delta = e.metric_rank - e.human_rank;
        report.sum_abs_delta += std::abs(e.delta);
        report.entries.push_back(std::move(e));
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const RankEntry& a, const RankEntry& b) { return a.human_rank < b.human_rank; });
    return report;
}

}  // namespace damteval
