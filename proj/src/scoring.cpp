#include "damteval/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "damteval/errors.hpp"

namespace damteval {

unsigned threads_from_env() {
    const char* raw = std::getenv("DAMTEVAL_THREADS");
    unsigned value = 0;
    if (raw != nullptr && *raw != '\0') {
        const std::string_view s(raw);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            fail(ErrorCode::ConfigError, "DAMTEVAL_THREADS must be a non-negative integer, got '" + std::string(s) + "'");
        }
    }
    if (value == 0) value = std::max(1u, std::thread::hardware_concurrency());
    return value;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

void require_scorable(const EvaluationCorpus& corpus) {
    if (corpus.segment_count() == 0) fail(ErrorCode::EmptyCorpus, "corpus has no segments");
    if (corpus.system_count() == 0) fail(ErrorCode::EmptySystemSet, "corpus has no systems");
    if (!corpus.has_embeddings()) fail(ErrorCode::CoverageError, "corpus has no bound embeddings");
}

struct SegmentWork {
    std::vector<SimilarityMatrix> sims;
    std::vector<MatchScores> raw;
    std::vector<std::vector<double>> maxima;
};

SegmentWork match_segment(const EvaluationCorpus& corpus, std::size_t n) {
    SegmentWork w;
    const auto& ref = corpus.reference_embeddings[n];
    for (const auto& sys : corpus.systems) {
        w.sims.push_back(build_similarity_matrix(ref, sys.embeddings.at(n)));
        w.raw.push_back(greedy_match(w.sims.back()));
        w.maxima.push_back(w.raw.back().per_ref_max);
    }
    return w;
}

}  // namespace

std::vector<DifficultyMap> corpus_difficulty(const EvaluationCorpus& corpus, unsigned threads) {
    require_scorable(corpus);
    std::vector<DifficultyMap> maps(corpus.segment_count());
    parallel_for(corpus.segment_count(), threads, [&](std::size_t n) {
        const auto w = match_segment(corpus, n);
        maps[n] = difficulty_from_maxima(n, corpus.reference_embeddings[n].tokens(), w.maxima);
    });
    return maps;
}

CorpusScores score_corpus(const EvaluationCorpus& corpus, const ScoreOptions& options) {
    require_scorable(corpus);
    const std::size_t n_seg = corpus.segment_count();
    const std::size_t k = corpus.system_count();
    if (options.use_difficulty && options.exclude_self && k < 2) {
        fail(ErrorCode::EmptySystemSet, "leave-one-out difficulty needs at least two systems");
    }

    std::vector<std::vector<DAScores>> per_segment(n_seg);
    std::vector<DifficultyMap> shared(options.use_difficulty && !options.exclude_self ? n_seg : 0);

    parallel_for(n_seg, options.threads, [&](std::size_t n) {
        const auto w = match_segment(corpus, n);
        const auto& ref_tokens = corpus.reference_embeddings[n].tokens();
        auto& out = per_segment[n];
        out.reserve(k);
        if (!options.use_difficulty) {
            const auto unit = DifficultyMap::uniform(n, ref_tokens);
            for (std::size_t s = 0; s < k; ++s) out.push_back(da_scores(w.sims[s], w.raw[s], unit));
        } else if (!options.exclude_self) {
            shared[n] = difficulty_from_maxima(n, ref_tokens, w.maxima);
            for (std::size_t s = 0; s < k; ++s) out.push_back(da_scores(w.sims[s], w.raw[s], shared[n]));
        } else {
            for (std::size_t s = 0; s < k; ++s) {
                const auto dmap = difficulty_from_maxima(n, ref_tokens, w.maxima, s);
                out.push_back(da_scores(w.sims[s], w.raw[s], dmap));
            }
        }
    });

    CorpusScores result;
    result.difficulty = std::move(shared);
    for (std::size_t s = 0; s < k; ++s) {
        SystemScores sys;
        sys.name = corpus.systems[s].name;
        sys.segments.reserve(n_seg);
        double p = 0.0, r = 0.0, f = 0.0, dp = 0.0, dr = 0.0;
        for (std::size_t n = 0; n < n_seg; ++n) {
            const auto& seg = per_segment[n][s];
            p += seg.raw.precision;
            r += seg.raw.recall;
            f += seg.raw.f;
            dp += seg.da_precision;
            dr += seg.da_recall;
            sys.segments.push_back(seg);
        }
        const double denom = static_cast<double>(n_seg);
        sys.precision = p / denom;
        sys.recall = r / denom;
        sys.f = f / denom;
        sys.da_precision = dp / denom;
        sys.da_recall = dr / denom;
        sys.da_f = system_score(sys.segments);
        result.systems.push_back(std::move(sys));
    }
    std::sort(result.systems.begin(), result.systems.end(),
              [](const SystemScores& a, const SystemScores& b) { return a.name < b.name; });
    return result;
}

}  // namespace damteval
