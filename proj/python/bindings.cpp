#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "damteval/bleu.hpp"
#include "damteval/corpus.hpp"
#include "damteval/difficulty.hpp"
#include "damteval/emb1.hpp"
#include "damteval/errors.hpp"
#include "damteval/scoring.hpp"
#include "damteval/similarity.hpp"
#include "damteval/statistics.hpp"

namespace py = pybind11;
using namespace damteval;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

SegmentEmbedding make_embedding(std::vector<std::string> tokens, const FloatArray& matrix) {
    if (matrix.ndim() != 2) throw py::value_error("embedding matrix must be 2-D (tokens x dim)");
    const auto rows = static_cast<std::size_t>(matrix.shape(0));
    const auto dim = static_cast<std::size_t>(matrix.shape(1));
    if (rows != tokens.size()) throw py::value_error("matrix row count must equal the number of tokens");
    std::vector<float> values(matrix.data(), matrix.data() + rows * dim);
    return SegmentEmbedding(std::move(tokens), dim, std::move(values));
}

py::array_t<float> embedding_matrix(const SegmentEmbedding& e) {
    py::array_t<float> out({e.size(), e.dim()});
    std::copy(e.values().begin(), e.values().end(), out.mutable_data());
    return out;
}

py::array_t<double> sim_values(const SimilarityMatrix& m) {
    py::array_t<double> out({m.rows, m.cols});
    std::copy(m.values.begin(), m.values.end(), out.mutable_data());
    return out;
}

SimilarityMatrix sim_from_array(const DoubleArray& values, std::vector<std::string> ref_tokens,
                                std::vector<std::string> hyp_tokens) {
    if (values.ndim() != 2) throw py::value_error("similarity matrix must be 2-D");
    SimilarityMatrix m;
    m.rows = static_cast<std::size_t>(values.shape(0));
    m.cols = static_cast<std::size_t>(values.shape(1));
    m.values.assign(values.data(), values.data() + m.rows * m.cols);
    if (ref_tokens.empty() && m.rows) ref_tokens.assign(m.rows, "");
    if (hyp_tokens.empty() && m.cols) hyp_tokens.assign(m.cols, "\x1f");
    if (ref_tokens.size() != m.rows || hyp_tokens.size() != m.cols) {
        throw py::value_error("token lists must match the matrix shape");
    }
    m.ref_tokens = std::move(ref_tokens);
    m.hyp_tokens = std::move(hyp_tokens);
    return m;
}

KendallVariant variant_of(const std::string& v) {
    if (v == "a") return KendallVariant::TauA;
    if (v == "b") return KendallVariant::TauB;
    throw py::value_error("tau variant must be 'a' or 'b'");
}

EvaluationCorpus load_corpus(const std::filesystem::path& refs, const std::map<std::string, std::filesystem::path>& hyps,
                             const std::filesystem::path& ref_emb,
                             const std::map<std::string, std::filesystem::path>& sys_embs) {
    std::vector<std::pair<std::string, std::filesystem::path>> named(hyps.begin(), hyps.end());
    auto corpus = load_text_corpus(refs, named);
    std::map<std::string, EmbeddingFile> files;
    for (const auto& [name, path] : sys_embs) files.emplace(name, read_emb1(path));
    return bind_embeddings(std::move(corpus), read_emb1(ref_emb), files);
}

}  // namespace

PYBIND11_MODULE(_damteval, m) {
    m.doc() = "Difficulty-aware BERTScore and metric meta-evaluation";

    static py::exception<Error> error_type(m, "DamtevalError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // args = (code, message)
            py::tuple args = py::make_tuple(std::string(to_string(e.code())), std::string(e.what()));
            PyErr_SetObject(error_type.ptr(), args.ptr());
        }
    });

    py::class_<SegmentEmbedding>(m, "SegmentEmbedding")
        .def(py::init(&make_embedding), py::arg("tokens"), py::arg("matrix"))
        .def_property_readonly("tokens", &SegmentEmbedding::tokens)
        .def_property_readonly("dim", &SegmentEmbedding::dim)
        .def_property_readonly("matrix", &embedding_matrix)
        .def("__len__", &SegmentEmbedding::size)
        .def("__eq__", [](const SegmentEmbedding& a, const SegmentEmbedding& b) { return a == b; });

    py::class_<MatchScores>(m, "MatchScores")
        .def_readonly("recall", &MatchScores::recall)
        .def_readonly("precision", &MatchScores::precision)
        .def_readonly("f", &MatchScores::f)
        .def_readonly("per_ref_max", &MatchScores::per_ref_max)
        .def_readonly("per_hyp_max", &MatchScores::per_hyp_max);

    py::class_<DifficultyMap>(m, "DifficultyMap")
        .def(py::init([](std::vector<std::string> tokens, std::vector<double> weights, std::size_t segment_index) {
                 if (tokens.size() != weights.size()) throw py::value_error("one weight per token");
                 DifficultyMap d;
                 d.ref_tokens = std::move(tokens);
                 d.weights = std::move(weights);
                 d.segment_index = segment_index;
                 d.k_systems = 1;
                 return d;
             }),
             py::arg("tokens"), py::arg("weights"), py::arg("segment_index") = 0)
        .def_readonly("segment_index", &DifficultyMap::segment_index)
        .def_readonly("weights", &DifficultyMap::weights)
        .def_readonly("ref_tokens", &DifficultyMap::ref_tokens)
        .def_readonly("k_systems", &DifficultyMap::k_systems);

    py::class_<DAScores>(m, "DAScores")
        .def_readonly("da_recall", &DAScores::da_recall)
        .def_readonly("da_precision", &DAScores::da_precision)
        .def_readonly("da_f", &DAScores::da_f)
        .def_readonly("raw", &DAScores::raw);

    m.def(
        "cosine_similarity",
        [](const DoubleArray& a, const DoubleArray& b) {
            return cosine_similarity(std::span<const double>(a.data(), a.size()),
                                     std::span<const double>(b.data(), b.size()));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "similarity_matrix",
        [](const SegmentEmbedding& ref, const SegmentEmbedding& hyp) {
            return sim_values(build_similarity_matrix(ref, hyp));
        },
        py::arg("ref"), py::arg("hyp"));
    m.def(
        "greedy_match",
        [](const DoubleArray& sim) { return greedy_match(sim_from_array(sim, {}, {})); }, py::arg("sim"));
    m.def(
        "compute_difficulty",
        [](const SegmentEmbedding& ref, const std::vector<SegmentEmbedding>& hyps, std::size_t segment_index) {
            return compute_difficulty(ref, hyps, segment_index);
        },
        py::arg("ref"), py::arg("hyps"), py::arg("segment_index") = 0);
    m.def(
        "da_scores",
        [](const SegmentEmbedding& ref, const SegmentEmbedding& hyp, const DifficultyMap& dmap) {
            return da_scores(build_similarity_matrix(ref, hyp), dmap);
        },
        py::arg("ref"), py::arg("hyp"), py::arg("difficulty"));
    m.def(
        "system_score", [](const std::vector<DAScores>& segs) { return system_score(segs); }, py::arg("segments"));

    m.def(
        "pearson", [](std::vector<double> x, std::vector<double> y) { return pearson(x, y); }, py::arg("x"),
        py::arg("y"));
    m.def(
        "spearman", [](std::vector<double> x, std::vector<double> y) { return spearman(x, y); }, py::arg("x"),
        py::arg("y"));
    m.def(
        "kendall",
        [](std::vector<double> x, std::vector<double> y, const std::string& variant) {
            return kendall(x, y, variant_of(variant));
        },
        py::arg("x"), py::arg("y"), py::arg("variant") = "a");
    m.def(
        "top_k_select",
        [](const ScoreMap& human, std::optional<double> fraction, std::optional<std::size_t> k) {
            if (fraction.has_value() == k.has_value()) throw py::value_error("give exactly one of fraction or k");
            return top_k_select(human, fraction ? TopKSelection::of_fraction(*fraction) : TopKSelection::of_count(*k));
        },
        py::arg("human"), py::arg("fraction") = py::none(), py::arg("k") = py::none());
    m.def(
        "top_k_sweep",
        [](const ScoreMap& metric, const ScoreMap& human, std::size_t k_min, std::size_t k_max,
           const std::string& variant) {
            py::list out;
            for (const auto& p : top_k_sweep(metric, human, k_min, k_max, variant_of(variant))) {
                out.append(py::dict(py::arg("k") = p.k, py::arg("tau") = p.result.kendall_tau,
                                    py::arg("rho") = p.result.spearman_rho, py::arg("r") = p.result.pearson_r));
            }
            return out;
        },
        py::arg("metric"), py::arg("human"), py::arg("k_min"), py::arg("k_max"), py::arg("variant") = "a");
    m.def(
        "rank_report",
        [](const ScoreMap& metric, const ScoreMap& human, bool lower_is_better) {
            const auto r = rank_report(metric, human, lower_is_better ? Direction::LowerBetter : Direction::HigherBetter);
            py::list rows;
            for (const auto& e : r.entries) {
                rows.append(py::dict(py::arg("system") = e.system, py::arg("score") = e.metric_score,
                                     py::arg("human") = e.human_score, py::arg("metric_rank") = e.metric_rank,
                                     py::arg("human_rank") = e.human_rank, py::arg("delta") = e.delta));
            }
            return py::dict(py::arg("systems") = rows, py::arg("sum_abs_delta") = r.sum_abs_delta,
                            py::arg("metric_ties") = r.metric_ties, py::arg("human_ties") = r.human_ties);
        },
        py::arg("metric"), py::arg("human"), py::arg("lower_is_better") = false);

    m.def(
        "corpus_bleu", [](const std::vector<std::string>& refs, const std::vector<std::string>& hyps) {
            return corpus_bleu_text(refs, hyps);
        },
        py::arg("refs"), py::arg("hyps"));

    m.def(
        "read_emb1",
        [](const std::filesystem::path& path) {
            const auto f = read_emb1(path);
            py::list records;
            for (const auto& r : f.records) records.append(py::make_tuple(r.segment_index, r.embedding));
            return py::make_tuple(f.dim, records);
        },
        py::arg("path"), "Returns (dim, [(segment_index, SegmentEmbedding), ...]).");
    m.def(
        "write_emb1",
        [](const std::filesystem::path& path, std::uint32_t dim,
           const std::vector<std::pair<std::uint32_t, SegmentEmbedding>>& records) {
            EmbeddingFile f;
            f.dim = dim;
            for (const auto& [idx, emb] : records) f.records.push_back({idx, emb});
            write_emb1(f, path);
        },
        py::arg("path"), py::arg("dim"), py::arg("records"));

    m.def(
        "score_corpus",
        [](const std::filesystem::path& refs, const std::map<std::string, std::filesystem::path>& hyps,
           const std::filesystem::path& ref_emb, const std::map<std::string, std::filesystem::path>& sys_embs,
           bool use_difficulty, bool exclude_self, unsigned threads) {
            const auto corpus = load_corpus(refs, hyps, ref_emb, sys_embs);
            ScoreOptions opts;
            opts.use_difficulty = use_difficulty;
            opts.exclude_self = exclude_self;
            opts.threads = threads;
            py::gil_scoped_release release;
            const auto scores = score_corpus(corpus, opts);
            py::gil_scoped_acquire acquire;
            py::dict out;
            for (const auto& s : scores.systems) {
                out[py::str(s.name)] = py::dict(py::arg("precision") = s.precision, py::arg("recall") = s.recall,
                                                py::arg("f") = s.f, py::arg("da_precision") = s.da_precision,
                                                py::arg("da_recall") = s.da_recall, py::arg("da_f") = s.da_f);
            }
            return out;
        },
        py::arg("refs"), py::arg("hyps"), py::arg("ref_emb"), py::arg("sys_embs"), py::arg("use_difficulty") = true,
        py::arg("exclude_self") = false, py::arg("threads") = 1);
}
