#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "damteval/emb1.hpp"
#include "damteval/similarity.hpp"

namespace damteval {

struct SystemOutput {
    std::string name;
    std::filesystem::path source;
    std::vector<std::string> segments;
    // Filled by bind_embeddings; indexed by segment.
    std::vector<SegmentEmbedding> embeddings;
};

/// One reference set plus K systems' aligned outputs.
///
/// Text lines are kept for display and BLEU; the token strings inside the
/// bound embeddings are what scoring uses.
struct EvaluationCorpus {
    std::filesystem::path reference_source;
    std::vector<std::string> references;
    std::vector<SystemOutput> systems;
    std::optional<std::map<std::string, double>> human_scores;
    std::vector<SegmentEmbedding> reference_embeddings;

    std::size_t segment_count() const noexcept { return references.size(); }
    std::size_t system_count() const noexcept { return systems.size(); }
    bool has_embeddings() const noexcept { return !references.empty() && reference_embeddings.size() == references.size(); }
    const SystemOutput& system(const std::string& name) const;
};

// One segment per line, split on '\n'. A final newline does not start a new
// segment.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// `system_name<TAB>score` per line; blank lines are skipped.
std::map<std::string, double> read_human_scores(const std::filesystem::path& path);

// `.txt` is dropped; every other suffix is part of the name ("MSRA.6926").
std::string system_name_from_path(const std::filesystem::path& path);

EvaluationCorpus load_text_corpus(const std::filesystem::path& refs_path,
                                  const std::vector<std::filesystem::path>& system_paths,
                                  const std::optional<std::filesystem::path>& human_scores_path = std::nullopt);

// Same as above with explicit system names (manifest override).
EvaluationCorpus load_text_corpus(const std::filesystem::path& refs_path,
                                  const std::vector<std::pair<std::string, std::filesystem::path>>& systems,
                                  const std::optional<std::filesystem::path>& human_scores_path = std::nullopt);

EvaluationCorpus bind_embeddings(EvaluationCorpus corpus, const EmbeddingFile& ref_emb,
                                 const std::map<std::string, EmbeddingFile>& sys_embs);

}  // namespace damteval
