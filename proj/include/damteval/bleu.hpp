#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace damteval {

inline constexpr std::size_t kBleuOrder = 4;

struct NGramStats {
    std::array<std::size_t, kBleuOrder> matches{};  // clipped
    std::array<std::size_t, kBleuOrder> totals{};   // hypothesis n-grams
    std::size_t hyp_length = 0;
    std::size_t ref_length = 0;

    NGramStats& operator+=(const NGramStats& other);
};

std::vector<std::string> whitespace_tokenize(std::string_view line);

NGramStats ngram_stats(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// Geometric mean of the four precisions times the brevity penalty; 0 when
// any precision is 0.
double bleu_from_stats(const NGramStats& stats);

double corpus_bleu(const std::vector<std::vector<std::string>>& refs,
                   const std::vector<std::vector<std::string>>& hyps);

// Convenience over raw text lines, whitespace-tokenized.
double corpus_bleu_text(const std::vector<std::string>& refs, const std::vector<std::string>& hyps);

}  // namespace damteval
