#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace damteval {

/// Contextual embeddings of one segment: one row per subword token.
///
/// Rows are stored row-major as float32, exactly as read from disk. The
/// constructor rejects zero rows (DegenerateEmbedding) and a value buffer
/// whose size is not tokens.size() * dim (DimensionMismatch).
class SegmentEmbedding {
  public:
    SegmentEmbedding() = default;
    SegmentEmbedding(std::vector<std::string> tokens, std::size_t dim, std::vector<float> values);

    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }
    std::size_t dim() const noexcept { return dim_; }

    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& token(std::size_t i) const { return tokens_.at(i); }
    std::span<const float> row(std::size_t i) const;
    std::span<const float> values() const noexcept { return values_; }

    // Euclidean norm of row i, cached at construction.
    double norm(std::size_t i) const { return norms_.at(i); }

    friend bool operator==(const SegmentEmbedding& a, const SegmentEmbedding& b) {
        return a.dim_ == b.dim_ && a.tokens_ == b.tokens_ && a.values_ == b.values_;
    }

  private:
    std::vector<std::string> tokens_;
    std::size_t dim_ = 1;
    std::vector<float> values_;
    std::vector<double> norms_;
};

/// |t| x |h| cosine similarities between reference rows and hypothesis rows.
struct SimilarityMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
    std::vector<std::string> ref_tokens;
    std::vector<std::string> hyp_tokens;

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

/// Unweighted greedy-matching scores (vanilla BERTScore R/P/F).
struct MatchScores {
    double recall = 0.0;
    double precision = 0.0;
    double f = 0.0;
    std::vector<double> per_ref_max;
    std::vector<double> per_hyp_max;
};

double cosine_similarity(std::span<const float> a, std::span<const float> b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

SimilarityMatrix build_similarity_matrix(const SegmentEmbedding& ref, const SegmentEmbedding& hyp);

MatchScores greedy_match(const SimilarityMatrix& sim);

// Harmonic mean with the 0/0 -> 0 convention.
double harmonic_f(double recall, double precision) noexcept;

// Left-to-right mean; 0 for an empty range.
double ordered_mean(std::span<const double> xs) noexcept;

}  // namespace damteval
