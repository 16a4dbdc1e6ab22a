#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "damteval/similarity.hpp"

namespace damteval {

/// Per-token difficulty of one reference segment.
///
/// weights[i] = 1 - mean over systems of the best similarity any token of
/// that system's hypothesis reaches against reference token i. A token that
/// every system reproduces gets 0; a token no system comes close to gets 1
/// (or up to 2 for negatively correlated embeddings).
struct DifficultyMap {
    std::size_t segment_index = 0;
    std::vector<double> weights;
    std::vector<std::string> ref_tokens;
    std::size_t k_systems = 0;

    // All weights 1: difficulty-aware scores collapse to vanilla ones.
    static DifficultyMap uniform(std::size_t segment_index, std::vector<std::string> ref_tokens);
};

struct DAScores {
    double da_recall = 0.0;
    double da_precision = 0.0;
    double da_f = 0.0;
    MatchScores raw;
};

/// Difficulty from each system's per-reference-token maxima.
///
/// `per_system_ref_max[k][i]` is max_h sim(t_i, h) over system k's hypothesis.
/// With `exclude` set, that system is left out of the average (leave-one-out).
/// The K contributions of a token are summed in ascending value order, so the
/// result does not depend on the order systems are listed in.
DifficultyMap difficulty_from_maxima(std::size_t segment_index, std::vector<std::string> ref_tokens,
                                     std::span<const std::vector<double>> per_system_ref_max,
                                     std::optional<std::size_t> exclude = std::nullopt);

DifficultyMap compute_difficulty(const SegmentEmbedding& ref, std::span<const SegmentEmbedding> hyps,
                                 std::size_t segment_index = 0);

/// d(h) for hypothesis token `hyp_index`: 1 when its surface string is not a
/// reference token, otherwise the weight of the same-string reference token
/// it is most similar to (lowest index on ties).
double hypothesis_weight(std::size_t hyp_index, const SimilarityMatrix& sim, const DifficultyMap& dmap);

DAScores da_scores(const SimilarityMatrix& sim, const DifficultyMap& dmap);
DAScores da_scores(const SimilarityMatrix& sim, const MatchScores& raw, const DifficultyMap& dmap);

// Mean segment-level DA-F in segment order. Throws EmptyCorpus on an empty list.
double system_score(std::span<const DAScores> per_segment);

}  // namespace damteval
