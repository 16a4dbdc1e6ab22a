#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "damteval/corpus.hpp"
#include "damteval/difficulty.hpp"

namespace damteval {

struct ScoreOptions {
    // false: every difficulty weight is 1, so DA scores equal vanilla ones.
    bool use_difficulty = true;
    // Leave the scored system out of its own difficulty average.
    bool exclude_self = false;
    // 0 means one worker per hardware thread.
    unsigned threads = 1;
};

struct SystemScores {
    std::string name;
    std::vector<DAScores> segments;
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
    double da_precision = 0.0;
    double da_recall = 0.0;
    double da_f = 0.0;
};

struct CorpusScores {
    // Sorted by system name.
    std::vector<SystemScores> systems;
    // Shared per-segment difficulty; empty under exclude_self or without difficulty.
    std::vector<DifficultyMap> difficulty;
};

CorpusScores score_corpus(const EvaluationCorpus& corpus, const ScoreOptions& options = {});

// Per-segment difficulty over every system in the corpus.
std::vector<DifficultyMap> corpus_difficulty(const EvaluationCorpus& corpus, unsigned threads = 1);

// Worker count from DAMTEVAL_THREADS (unset or 0: hardware concurrency).
unsigned threads_from_env();

// Runs body(i) for i in [0, n) on up to `threads` workers. Callers write to
// disjoint slots, so output does not depend on the worker count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace damteval
