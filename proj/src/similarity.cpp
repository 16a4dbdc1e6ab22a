#include "damteval/similarity.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "damteval/errors.hpp"

namespace damteval {

namespace {

constexpr double kRangeSlack = 1e-9;

template <typename T>
double dot(std::span<const T> a, std::span<const T> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

template <typename T>
double l2_norm(std::span<const T> a) noexcept {
    return std::sqrt(dot(a, a));
}

// Shared by the scalar and matrix routes so both produce identical bits.
double cosine_from(double dot_ab, double norm_a, double norm_b) noexcept {
    const double value = dot_ab / (norm_a * norm_b);
    assert(value <= 1.0 + kRangeSlack && value >= -1.0 - kRangeSlack);
    return value;
}

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::DimensionMismatch, "cosine_similarity: vectors of dimension " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
    }
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) fail(ErrorCode::DegenerateEmbedding, "cosine_similarity: zero-norm vector");
    return cosine_from(dot(a, b), na, nb);
}

}  // namespace

SegmentEmbedding::SegmentEmbedding(std::vector<std::string> tokens, std::size_t dim, std::vector<float> values)
    : tokens_(std::move(tokens)), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) fail(ErrorCode::DimensionMismatch, "embedding dimension must be at least 1");
    if (values_.size() != tokens_.size() * dim_) {
        fail(ErrorCode::DimensionMismatch, "embedding has " + std::to_string(tokens_.size()) + " tokens but " +
                                               std::to_string(values_.size()) + " values for dimension " +
                                               std::to_string(dim_));
    }
    norms_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const double n = l2_norm(row(i));
        if (n == 0.0) {
            fail(ErrorCode::DegenerateEmbedding, "embedding row " + std::to_string(i) + " (token '" + tokens_[i] +
                                                     "') is the zero vector");
        }
        norms_.push_back(n);
    }
}

std::span<const float> SegmentEmbedding::row(std::size_t i) const {
    return std::span<const float>(values_).subspan(i * dim_, dim_);
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

double cosine_similarity(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }

SimilarityMatrix build_similarity_matrix(const SegmentEmbedding& ref, const SegmentEmbedding& hyp) {
    if (ref.dim() != hyp.dim()) {
        fail(ErrorCode::DimensionMismatch, "similarity matrix: reference dimension " + std::to_string(ref.dim()) +
                                               " vs hypothesis dimension " + std::to_string(hyp.dim()));
    }
    SimilarityMatrix sim;
    sim.rows = ref.size();
    sim.cols = hyp.size();
    sim.values.resize(sim.rows * sim.cols);
    sim.ref_tokens = ref.tokens();
    sim.hyp_tokens = hyp.tokens();
    for (std::size_t i = 0; i < sim.rows; ++i) {
        const auto r = ref.row(i);
        for (std::size_t j = 0; j < sim.cols; ++j) {
            sim.at(i, j) = cosine_from(dot(r, hyp.row(j)), ref.norm(i), hyp.norm(j));
        }
    }
    return sim;
}

double harmonic_f(double recall, double precision) noexcept {
    const double denom = recall + precision;
    if (denom == 0.0) return 0.0;
    return 2.0 * recall * precision / denom;
}

double ordered_mean(std::span<const double> xs) noexcept {
    if (xs.empty()) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

MatchScores greedy_match(const SimilarityMatrix& sim) {
    MatchScores out;
    // Max over an empty axis is 0.
    out.per_ref_max.assign(sim.rows, sim.cols == 0 ? 0.0 : -std::numeric_limits<double>::infinity());
    out.per_hyp_max.assign(sim.cols, sim.rows == 0 ? 0.0 : -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < sim.rows; ++i) {
        for (std::size_t j = 0; j < sim.cols; ++j) {
            const double v = sim.at(i, j);
            if (v > out.per_ref_max[i]) out.per_ref_max[i] = v;
            if (v > out.per_hyp_max[j]) out.per_hyp_max[j] = v;
        }
    }
    out.recall = ordered_mean(out.per_ref_max);
    out.precision = ordered_mean(out.per_hyp_max);
    out.f = harmonic_f(out.recall, out.precision);
    return out;
}

}  // namespace damteval
