#include "damteval/corpus.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "damteval/errors.hpp"

namespace damteval {

namespace fs = std::filesystem;

const SystemOutput& EvaluationCorpus::system(const std::string& name) const {
    for (const auto& s : systems) {
        if (s.name == name) return s;
    }
    fail(ErrorCode::ConfigError, "unknown system '" + name + "'");
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, path.string() + ": cannot open");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        const std::size_t nl = content.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(content.substr(start));
            break;
        }
        lines.push_back(content.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::map<std::string, double> read_human_scores(const fs::path& path) {
    const auto lines = read_lines(path);
    std::map<std::string, double> scores;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string& line = lines[n];
        const std::string where = path.string() + ":" + std::to_string(n + 1);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) fail(ErrorCode::ParseError, where + ": expected 'system<TAB>score'");
        const std::string name = line.substr(0, tab);
        std::string value = line.substr(tab + 1);
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
        double score = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
        if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
            fail(ErrorCode::ParseError, where + ": cannot parse score '" + value + "'");
        }
        if (!scores.emplace(name, score).second) {
            fail(ErrorCode::ConfigError, where + ": duplicate human score for system '" + name + "'");
        }
    }
    return scores;
}

std::string system_name_from_path(const fs::path& path) {
    const fs::path file = path.filename();
    return file.extension() == ".txt" ? file.stem().string() : file.string();
}

EvaluationCorpus load_text_corpus(const fs::path& refs_path, const std::vector<fs::path>& system_paths,
                                  const std::optional<fs::path>& human_scores_path) {
    std::vector<std::pair<std::string, fs::path>> named;
    named.reserve(system_paths.size());
    for (const auto& p : system_paths) named.emplace_back(system_name_from_path(p), p);
    return load_text_corpus(refs_path, named, human_scores_path);
}

EvaluationCorpus load_text_corpus(const fs::path& refs_path,
                                  const std::vector<std::pair<std::string, fs::path>>& systems,
                                  const std::optional<fs::path>& human_scores_path) {
    EvaluationCorpus corpus;
    corpus.reference_source = refs_path;
    corpus.references = read_lines(refs_path);
    std::set<std::string> seen;
    for (const auto& [name, path] : systems) {
        if (!seen.insert(name).second) {
            fail(ErrorCode::ConfigError, path.string() + ": duplicate system name '" + name + "'");
        }
        SystemOutput sys{name, path, read_lines(path), {}};
        if (sys.segments.size() != corpus.references.size()) {
            fail(ErrorCode::AlignmentError, path.string() + ": " + std::to_string(sys.segments.size()) +
                                                " lines, reference " + refs_path.string() + " has " +
                                                std::to_string(corpus.references.size()));
        }
        corpus.systems.push_back(std::move(sys));
    }
    if (human_scores_path) corpus.human_scores = read_human_scores(*human_scores_path);
    return corpus;
}

namespace {

std::vector<SegmentEmbedding> take_segments(const EmbeddingFile& file, std::size_t n, const std::string& role) {
    std::vector<std::size_t> missing;
    std::vector<std::size_t> extra;
    std::vector<const SegmentEmbedding*> slots(n, nullptr);
    for (const auto& rec : file.records) {
        if (rec.segment_index < n) {
            slots[rec.segment_index] = &rec.embedding;
        } else {
            extra.push_back(rec.segment_index);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i] == nullptr) missing.push_back(i);
    }
    auto join = [](const std::vector<std::size_t>& xs) {
        std::ostringstream os;
        for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
        return os.str();
    };
    if (!missing.empty()) {
        fail(ErrorCode::CoverageError, role + ": embeddings missing for segment indices " + join(missing));
    }
    if (!extra.empty()) {
        fail(ErrorCode::CoverageError, role + ": embeddings for segment indices beyond the corpus (N=" +
                                           std::to_string(n) + "): " + join(extra));
    }
    std::vector<SegmentEmbedding> out;
    out.reserve(n);
    for (const auto* e : slots) out.push_back(*e);
    return out;
}

}  // namespace

EvaluationCorpus bind_embeddings(EvaluationCorpus corpus, const EmbeddingFile& ref_emb,
                                 const std::map<std::string, EmbeddingFile>& sys_embs) {
    const std::size_t n = corpus.segment_count();
    std::set<std::string> names;
    for (const auto& s : corpus.systems) names.insert(s.name);
    for (const auto& [name, file] : sys_embs) {
        if (!names.count(name)) fail(ErrorCode::ConfigError, "embeddings given for unknown system '" + name + "'");
    }
    for (auto& sys : corpus.systems) {
        const auto it = sys_embs.find(sys.name);
        if (it == sys_embs.end()) {
            fail(ErrorCode::CoverageError, "system '" + sys.name + "': no embedding file");
        }
        if (it->second.dim != ref_emb.dim) {
            fail(ErrorCode::DimensionMismatch, "system '" + sys.name + "': embedding dimension " +
                                                   std::to_string(it->second.dim) + " vs reference dimension " +
                                                   std::to_string(ref_emb.dim));
        }
    }
    corpus.reference_embeddings = take_segments(ref_emb, n, "reference");
    for (auto& sys : corpus.systems) {
        sys.embeddings = take_segments(sys_embs.at(sys.name), n, "system '" + sys.name + "'");
    }
    return corpus;
}

}  // namespace damteval
