#include "damteval/difficulty.hpp"

#include <algorithm>

#include "damteval/errors.hpp"

namespace damteval {

DifficultyMap DifficultyMap::uniform(std::size_t segment_index, std::vector<std::string> ref_tokens) {
    DifficultyMap m;
    m.segment_index = segment_index;
    m.weights.assign(ref_tokens.size(), 1.0);
    m.ref_tokens = std::move(ref_tokens);
    m.k_systems = 1;
    return m;
}

DifficultyMap difficulty_from_maxima(std::size_t segment_index, std::vector<std::string> ref_tokens,
                                     std::span<const std::vector<double>> per_system_ref_max,
                                     std::optional<std::size_t> exclude) {
    const std::size_t total = per_system_ref_max.size();
    if (exclude && *exclude >= total) fail(ErrorCode::ConfigError, "excluded system index out of range");
    const std::size_t k = exclude ? total - 1 : total;
    if (k == 0) {
        fail(ErrorCode::EmptySystemSet, "difficulty of segment " + std::to_string(segment_index) +
                                            " needs at least one system");
    }
    for (const auto& maxima : per_system_ref_max) {
        if (maxima.size() != ref_tokens.size()) {
            fail(ErrorCode::DimensionMismatch, "segment " + std::to_string(segment_index) + ": " +
                                                   std::to_string(maxima.size()) + " maxima for " +
                                                   std::to_string(ref_tokens.size()) + " reference tokens");
        }
    }

    DifficultyMap m;
    m.segment_index = segment_index;
    m.k_systems = k;
    m.weights.resize(ref_tokens.size());
    std::vector<double> contrib;
    contrib.reserve(total);
    for (std::size_t i = 0; i < ref_tokens.size(); ++i) {
        contrib.clear();
        for (std::size_t s = 0; s < total; ++s) {
            if (exclude && s == *exclude) continue;
            contrib.push_back(per_system_ref_max[s][i]);
        }
        std::sort(contrib.begin(), contrib.end());
        double sum = 0.0;
        for (double c : contrib) sum += c;
        m.weights[i] = 1.0 - sum / static_cast<double>(k);
    }
    m.ref_tokens = std::move(ref_tokens);
    return m;
}

DifficultyMap compute_difficulty(const SegmentEmbedding& ref, std::span<const SegmentEmbedding> hyps,
                                 std::size_t segment_index) {
    if (hyps.empty()) {
        fail(ErrorCode::EmptySystemSet, "difficulty of segment " + std::to_string(segment_index) +
                                            " needs at least one system");
    }
    std::vector<std::vector<double>> maxima;
    maxima.reserve(hyps.size());
    for (const auto& hyp : hyps) maxima.push_back(greedy_match(build_similarity_matrix(ref, hyp)).per_ref_max);
    return difficulty_from_maxima(segment_index, ref.tokens(), maxima);
}

double hypothesis_weight(std::size_t hyp_index, const SimilarityMatrix& sim, const DifficultyMap& dmap) {
    const std::string& surface = sim.hyp_tokens.at(hyp_index);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < dmap.ref_tokens.size(); ++i) {
        if (dmap.ref_tokens[i] != surface) continue;
        if (!best || sim.at(i, hyp_index) > sim.at(*best, hyp_index)) best = i;
    }
    return best ? dmap.weights[*best] : 1.0;
}

DAScores da_scores(const SimilarityMatrix& sim, const DifficultyMap& dmap) {
    return da_scores(sim, greedy_match(sim), dmap);
}

DAScores da_scores(const SimilarityMatrix& sim, const MatchScores& raw, const DifficultyMap& dmap) {
    if (dmap.weights.size() != sim.rows || dmap.ref_tokens.size() != sim.rows) {
        fail(ErrorCode::DimensionMismatch, "difficulty map of segment " + std::to_string(dmap.segment_index) +
                                               " has " + std::to_string(dmap.weights.size()) +
                                               " weights for a similarity matrix with " +
                                               std::to_string(sim.rows) + " reference tokens");
    }
    DAScores out;
    out.raw = raw;

    std::vector<double> weighted(sim.rows);
    for (std::size_t i = 0; i < sim.rows; ++i) weighted[i] = dmap.weights[i] * raw.per_ref_max[i];
    out.da_recall = ordered_mean(weighted);

    weighted.resize(sim.cols);
    for (std::size_t j = 0; j < sim.cols; ++j) weighted[j] = hypothesis_weight(j, sim, dmap) * raw.per_hyp_max[j];
    out.da_precision = ordered_mean(weighted);

    out.da_f = harmonic_f(out.da_recall, out.da_precision);
    return out;
}

double system_score(std::span<const DAScores> per_segment) {
    if (per_segment.empty()) fail(ErrorCode::EmptyCorpus, "system score over an empty segment list");
    double acc = 0.0;
    for (const auto& s : per_segment) acc += s.da_f;
    return acc / static_cast<double>(per_segment.size());
}

}  // namespace damteval
