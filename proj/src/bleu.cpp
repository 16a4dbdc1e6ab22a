#include "damteval/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "damteval/errors.hpp"

namespace damteval {

NGramStats& NGramStats::operator+=(const NGramStats& other) {
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        matches[n] += other.matches[n];
        totals[n] += other.totals[n];
    }
    hyp_length += other.hyp_length;
    ref_length += other.ref_length;
    return *this;
}

std::vector<std::string> whitespace_tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

namespace {

using Counts = std::unordered_map<std::string, std::size_t>;

// Keys join tokens with a single space; tokens never contain whitespace.
Counts count_ngrams(const std::vector<std::string>& tokens, std::size_t order) {
    Counts counts;
    if (tokens.size() < order) return counts;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < order; ++j) {
            key += ' ';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

NGramStats ngram_stats(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
    NGramStats s;
    s.hyp_length = hyp.size();
    s.ref_length = ref.size();
    for (std::size_t n = 1; n <= kBleuOrder; ++n) {
        const auto hyp_counts = count_ngrams(hyp, n);
        const auto ref_counts = count_ngrams(ref, n);
        s.totals[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
        for (const auto& [gram, c] : hyp_counts) {
            const auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) s.matches[n - 1] += std::min(c, it->second);
        }
    }
    return s;
}

double bleu_from_stats(const NGramStats& stats) {
    double log_sum = 0.0;
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        if (stats.totals[n] == 0 || stats.matches[n] == 0) return 0.0;
        log_sum += std::log(static_cast<double>(stats.matches[n]) / static_cast<double>(stats.totals[n]));
    }
    double bp = 1.0;
    if (stats.hyp_length < stats.ref_length) {
        bp = std::exp(1.0 - static_cast<double>(stats.ref_length) / static_cast<double>(stats.hyp_length));
    }
    return std::clamp(bp * std::exp(log_sum / static_cast<double>(kBleuOrder)), 0.0, 1.0);
}

double corpus_bleu(const std::vector<std::vector<std::string>>& refs,
                   const std::vector<std::vector<std::string>>& hyps) {
    if (refs.size() != hyps.size()) {
        fail(ErrorCode::AlignmentError, "BLEU: " + std::to_string(refs.size()) + " references vs " +
                                            std::to_string(hyps.size()) + " hypotheses");
    }
    if (refs.empty()) fail(ErrorCode::EmptyCorpus, "BLEU over an empty corpus");
    NGramStats total;
    for (std::size_t i = 0; i < refs.size(); ++i) total += ngram_stats(refs[i], hyps[i]);
    return bleu_from_stats(total);
}

double corpus_bleu_text(const std::vector<std::string>& refs, const std::vector<std::string>& hyps) {
    std::vector<std::vector<std::string>> r, h;
    r.reserve(refs.size());
    h.reserve(hyps.size());
    for (const auto& line : refs) r.push_back(whitespace_tokenize(line));
    for (const auto& line : hyps) h.push_back(whitespace_tokenize(line));
    return corpus_bleu(r, h);
}

}  // namespace damteval
