#include "damteval/similarity.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "damteval/errors.hpp"
#include "test_util.hpp"

namespace damteval {
namespace {

using testing::embedding;
using testing::matrix;

double cos4(std::vector<float> a, std::vector<float> b) { return cosine_similarity(std::span<const float>(a), std::span<const float>(b)); }

TEST(CosineSimilarity, HandValues) {
    EXPECT_DOUBLE_EQ(cos4({1, 0, 0, 0}, {1, 0, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(cos4({1, 0, 0, 0}, {0, 1, 0, 0}), 0.0);
    EXPECT_NEAR(cos4({1, 0, 0, 0}, {0.6f, 0.8f, 0, 0}), 0.6, 1e-7);  // float32 inputs
    const std::vector<double> a{1, 0, 0, 0}, b{0.6, 0.8, 0, 0};
    EXPECT_NEAR(cosine_similarity(std::span<const double>(a), std::span<const double>(b)), 0.6, 1e-15);
}

TEST(CosineSimilarity, Errors) {
    try {
        cos4({0, 0, 0, 0}, {1, 0, 0, 0});
        FAIL() << "expected DegenerateEmbedding";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateEmbedding);
    }
    const std::vector<float> a{1, 0}, b{1, 0, 0};
    try {
        cosine_similarity(std::span<const float>(a), std::span<const float>(b));
        FAIL() << "expected DimensionMismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(CosineSimilarity, SelfScaleAndSymmetry) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<float> dist(-3.0f, 3.0f);
    std::uniform_real_distribution<float> scale(0.01f, 100.0f);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<float> a(8), b(8), ca(8);
        for (auto& v : a) v = dist(rng);
        for (auto& v : b) v = dist(rng);
        a[0] += 10.0f;
        const float c = scale(rng);
        std::transform(a.begin(), a.end(), ca.begin(), [c](float v) { return c * v; });
        EXPECT_NEAR(cos4(a, a), 1.0, 1e-9);
        EXPECT_NEAR(cos4(a, ca), 1.0, 1e-6);  // c*a is rounded to float32
        EXPECT_EQ(cos4(a, b), cos4(b, a));
        EXPECT_LE(std::abs(cos4(a, b)), 1.0 + 1e-9);
    }
}

TEST(SegmentEmbedding, RejectsZeroRowsAndBadSizes) {
    EXPECT_THROW(embedding({"a", "b"}, {{1, 0}, {0, 0}}), Error);
    EXPECT_THROW(SegmentEmbedding({"a"}, 2, {1.0f}), Error);
    EXPECT_THROW(SegmentEmbedding({}, 0, {}), Error);
    const SegmentEmbedding empty({}, 4, {});
    EXPECT_TRUE(empty.empty());
    EXPECT_EQ(empty.dim(), 4u);
}

TEST(SimilarityMatrix, HandCases) {
    const auto one = build_similarity_matrix(embedding({"a"}, {{1, 0}}), embedding({"a"}, {{1, 0}}));
    ASSERT_EQ(one.values.size(), 1u);
    EXPECT_DOUBLE_EQ(one.at(0, 0), 1.0);

    const auto swapped = build_similarity_matrix(embedding({"x", "y"}, {{1, 0}, {0, 1}}),
                                                 embedding({"y", "x"}, {{0, 1}, {1, 0}}));
    EXPECT_EQ(swapped.values, (std::vector<double>{0, 1, 1, 0}));

    const auto m = build_similarity_matrix(embedding({"x", "y"}, {{1, 0}, {0, 1}}), embedding({"z"}, {{0.6f, 0.8f}}));
    ASSERT_EQ(m.rows, 2u);
    ASSERT_EQ(m.cols, 1u);
    EXPECT_NEAR(m.at(0, 0), 0.6, 1e-7);
    EXPECT_NEAR(m.at(1, 0), 0.8, 1e-7);
    EXPECT_EQ(m.ref_tokens, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(m.hyp_tokens, (std::vector<std::string>{"z"}));
}

TEST(SimilarityMatrix, MatchesScalarCosineAndChecksDimensions) {
    std::mt19937 rng(11);
    const auto ref = testing::random_embedding(rng, 5, 6);
    const auto hyp = testing::random_embedding(rng, 4, 6);
    const auto m = build_similarity_matrix(ref, hyp);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(m.at(i, j), cosine_similarity(ref.row(i), hyp.row(j)));
    }
    try {
        build_similarity_matrix(ref, testing::random_embedding(rng, 2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    const auto empty = build_similarity_matrix(ref, SegmentEmbedding({}, 6, {}));
    EXPECT_EQ(empty.rows, 5u);
    EXPECT_EQ(empty.cols, 0u);
}

TEST(GreedyMatch, HandCases) {
    const auto perfect = greedy_match(matrix(2, 2, {1, 0, 0, 1}));
    EXPECT_EQ(perfect.recall, 1.0);
    EXPECT_EQ(perfect.precision, 1.0);
    EXPECT_EQ(perfect.f, 1.0);

    const auto m = greedy_match(matrix(2, 2, {0.8, 0.2, 0.1, 0.6}));
    EXPECT_NEAR(m.recall, 0.7, 1e-15);
    EXPECT_NEAR(m.precision, 0.7, 1e-15);
    EXPECT_NEAR(m.f, 0.7, 1e-15);
    EXPECT_EQ(m.per_ref_max, (std::vector<double>{0.8, 0.6}));
    EXPECT_EQ(m.per_hyp_max, (std::vector<double>{0.8, 0.6}));
}

TEST(GreedyMatch, DegenerateAxes) {
    const auto no_hyp = greedy_match(matrix(2, 0, {}));
    EXPECT_EQ(no_hyp.recall, 0.0);
    EXPECT_EQ(no_hyp.precision, 0.0);
    EXPECT_EQ(no_hyp.f, 0.0);
    EXPECT_EQ(no_hyp.per_ref_max, (std::vector<double>{0.0, 0.0}));
    EXPECT_TRUE(no_hyp.per_hyp_max.empty());

    const auto none = greedy_match(matrix(0, 0, {}));
    EXPECT_EQ(none.f, 0.0);

    // P + R = 0 with nonzero parts.
    const auto cancel = greedy_match(matrix(1, 2, {-0.5, -0.5}));
    EXPECT_EQ(cancel.recall, -0.5);
    const auto opposite = harmonic_f(0.5, -0.5);
    EXPECT_EQ(opposite, 0.0);
}

// Row/column maxima by direct enumeration.
MatchScores brute_force(const SimilarityMatrix& m) {
    MatchScores out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        double best = m.cols ? m.at(i, 0) : 0.0;
        for (std::size_t j = 1; j < m.cols; ++j) best = std::max(best, m.at(i, j));
        out.per_ref_max.push_back(best);
    }
    for (std::size_t j = 0; j < m.cols; ++j) {
        double best = m.rows ? m.at(0, j) : 0.0;
        for (std::size_t i = 1; i < m.rows; ++i) best = std::max(best, m.at(i, j));
        out.per_hyp_max.push_back(best);
    }
    double r = 0, p = 0;
    for (double v : out.per_ref_max) r += v;
    for (double v : out.per_hyp_max) p += v;
    out.recall = m.rows ? r / m.rows : 0.0;
    out.precision = m.cols ? p / m.cols : 0.0;
    out.f = (out.recall + out.precision) == 0 ? 0.0 : 2 * out.recall * out.precision / (out.recall + out.precision);
    return out;
}

TEST(GreedyMatch, AgreesWithBruteForceUpTo5x5) {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t rows = 0; rows <= 5; ++rows) {
        for (std::size_t cols = 0; cols <= 5; ++cols) {
            for (int trial = 0; trial < 40; ++trial) {
                std::vector<double> v(rows * cols);
                for (auto& x : v) x = dist(rng);
                const auto m = matrix(rows, cols, v);
                const auto got = greedy_match(m);
                const auto want = brute_force(m);
                EXPECT_EQ(got.per_ref_max, want.per_ref_max);
                EXPECT_EQ(got.per_hyp_max, want.per_hyp_max);
                EXPECT_EQ(got.recall, want.recall);
                EXPECT_EQ(got.precision, want.precision);
                EXPECT_EQ(got.f, want.f);
                if (got.recall > 0 && got.precision > 0) {
                    EXPECT_LE(got.f, std::max(got.recall, got.precision) + 1e-15);
                    EXPECT_GE(got.f, std::min(got.recall, got.precision) - 1e-15);
                }
            }
        }
    }
}

TEST(GreedyMatch, AppendingHypothesisTokenNeverLowersRefMaxima) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ref = testing::random_embedding(rng, 4, 5, "r");
        const auto hyp = testing::random_embedding(rng, 3, 5, "h");
        const auto extra = testing::random_embedding(rng, 1, 5, "x");
        std::vector<std::string> tokens = hyp.tokens();
        tokens.push_back("x");
        std::vector<float> values(hyp.values().begin(), hyp.values().end());
        values.insert(values.end(), extra.values().begin(), extra.values().end());
        const SegmentEmbedding longer(tokens, 5, values);
        const auto before = greedy_match(build_similarity_matrix(ref, hyp));
        const auto after = greedy_match(build_similarity_matrix(ref, longer));
        for (std::size_t i = 0; i < 4; ++i) EXPECT_GE(after.per_ref_max[i], before.per_ref_max[i]);
    }
}

TEST(GreedyMatch, HypothesisPermutationInvariance) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ref = testing::random_embedding(rng, 4, 3, "r");
        const auto hyp = testing::random_embedding(rng, 5, 3, "h");
        std::vector<std::size_t> perm{0, 1, 2, 3, 4};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::string> tokens;
        std::vector<float> values;
        for (auto p : perm) {
            tokens.push_back(hyp.token(p));
            const auto row = hyp.row(p);
            values.insert(values.end(), row.begin(), row.end());
        }
        const auto a = greedy_match(build_similarity_matrix(ref, hyp));
        const auto b = greedy_match(build_similarity_matrix(ref, SegmentEmbedding(tokens, 3, values)));
        EXPECT_EQ(a.recall, b.recall);
        EXPECT_NEAR(a.precision, b.precision, 1e-15);
        EXPECT_NEAR(a.f, b.f, 1e-15);
    }
}

}  // namespace
}  // namespace damteval
