#include "damteval/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>

#include "damteval/bleu.hpp"
#include "damteval/corpus.hpp"
#include "damteval/errors.hpp"
#include "damteval/report.hpp"
#include "damteval/scoring.hpp"
#include "damteval/statistics.hpp"

namespace damteval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CorpusArgs {
    std::string refs;
    std::string hyps_dir;
    std::string manifest;
    std::string emb_ref;
    std::string emb_dir;
};

struct OutputArgs {
    std::string format = "tsv";
    std::string out;
};

struct TopArgs {
    std::optional<double> fraction;
    std::optional<std::size_t> k;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& a) {
    cmd->add_option("--refs", a.refs, "Reference text, one segment per line")->required();
    cmd->add_option("--hyps-dir", a.hyps_dir, "Directory with one hypothesis file per system");
    cmd->add_option("--manifest", a.manifest,
                    "TSV of system<TAB>hypothesis path[<TAB>EMB1 path]; overrides --hyps-dir");
    cmd->add_option("--emb-ref", a.emb_ref, "EMB1 embeddings of the reference")->required();
    cmd->add_option("--emb-dir", a.emb_dir, "Directory holding <system>.emb1 per system");
}

void add_output_options(CLI::App* cmd, OutputArgs& a) {
    cmd->add_option("--output", a.format, "Output format")->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--out", a.out, "Write to this file instead of stdout");
}

KendallVariant parse_tau(const std::string& s) { return s == "b" ? KendallVariant::TauB : KendallVariant::TauA; }

void emit(const std::string& payload, const OutputArgs& o, std::ostream& out) {
    if (o.out.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::IoError, o.out + ": cannot open for writing");
    f << payload;
    if (!f) fail(ErrorCode::IoError, o.out + ": write failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json maybe(const std::optional<double>& v, bool absolute) {
    if (!v) return nullptr;
    return round6(absolute ? std::abs(*v) : *v);
}

std::string cell(const std::optional<double>& v, bool absolute) {
    if (!v) return "NA";
    return format_fixed(absolute ? std::abs(*v) : *v);
}

struct SystemSource {
    std::string name;
    fs::path hyp;
    fs::path emb;
};

std::vector<SystemSource> resolve_systems(const CorpusArgs& a) {
    std::vector<SystemSource> out;
    if (!a.manifest.empty()) {
        const auto lines = read_lines(a.manifest);
        const fs::path base = fs::path(a.manifest).parent_path();
        for (std::size_t n = 0; n < lines.size(); ++n) {
            if (lines[n].find_first_not_of(" \t\r") == std::string::npos) continue;
            std::vector<std::string> cells;
            std::stringstream ss(lines[n]);
            std::string c;
            while (std::getline(ss, c, '\t')) cells.push_back(c);
            if (cells.size() < 2 || cells.size() > 3) {
                fail(ErrorCode::ParseError, a.manifest + ":" + std::to_string(n + 1) +
                                                ": expected system<TAB>hypothesis[<TAB>embeddings]");
            }
            auto rel = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
            SystemSource s{cells[0], rel(cells[1]), {}};
            if (cells.size() == 3) {
                s.emb = rel(cells[2]);
            } else if (!a.emb_dir.empty()) {
                s.emb = fs::path(a.emb_dir) / (s.name + ".emb1");
            } else {
                fail(ErrorCode::ConfigError, a.manifest + ":" + std::to_string(n + 1) +
                                                 ": no embedding path and no --emb-dir");
            }
            out.push_back(std::move(s));
        }
    } else {
        if (a.hyps_dir.empty()) fail(ErrorCode::ConfigError, "one of --hyps-dir or --manifest is required");
        if (a.emb_dir.empty()) fail(ErrorCode::ConfigError, "--emb-dir is required with --hyps-dir");
        std::error_code ec;
        fs::directory_iterator it(a.hyps_dir, ec);
        if (ec) fail(ErrorCode::IoError, a.hyps_dir + ": cannot list directory");
        std::vector<fs::path> files;
        for (const auto& entry : it) {
            if (!entry.is_regular_file()) continue;
            if (entry.path().filename().string().starts_with(".")) continue;
            files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            const auto name = system_name_from_path(f);
            out.push_back({name, f, fs::path(a.emb_dir) / (name + ".emb1")});
        }
    }
    if (out.empty()) fail(ErrorCode::EmptySystemSet, "no system outputs found");
    return out;
}

EvaluationCorpus load_bound_corpus(const CorpusArgs& a, const std::vector<SystemSource>& systems) {
    std::vector<std::pair<std::string, fs::path>> named;
    for (const auto& s : systems) named.emplace_back(s.name, s.hyp);
    auto corpus = load_text_corpus(a.refs, named);
    const auto ref_emb = read_emb1(a.emb_ref);
    std::map<std::string, EmbeddingFile> sys_embs;
    for (const auto& s : systems) sys_embs.emplace(s.name, read_emb1(s.emb));
    return bind_embeddings(std::move(corpus), ref_emb, sys_embs);
}

std::vector<std::string> selected_metrics(const ScoreTable& table, const std::vector<std::string>& requested) {
    if (requested.empty()) return table.metrics;
    for (const auto& m : requested) table.column(m);
    return requested;
}

// ---- score -----------------------------------------------------------------

struct ScoreArgs {
    CorpusArgs corpus;
    OutputArgs output;
    bool no_difficulty = false;
    bool exclude_self = false;
    bool with_bleu = false;
};

std::string run_score(const ScoreArgs& a) {
    const auto corpus = load_bound_corpus(a.corpus, resolve_systems(a.corpus));
    ScoreOptions opts;
    opts.use_difficulty = !a.no_difficulty;
    opts.exclude_self = a.exclude_self;
    opts.threads = threads_from_env();
    const auto scores = score_corpus(corpus, opts);

    std::map<std::string, double> bleu;
    if (a.with_bleu) {
        for (const auto& sys : corpus.systems) bleu[sys.name] = corpus_bleu_text(corpus.references, sys.segments);
    }

    if (a.output.format == "json") {
        json j;
        j["command"] = "score";
        j["options"] = {{"difficulty", opts.use_difficulty}, {"exclude_self", opts.exclude_self}};
        j["segments"] = corpus.segment_count();
        j["systems"] = json::array();
        for (const auto& s : scores.systems) {
            json row;
            row["system"] = s.name;
            row["bertscore"] = {{"precision", round6(s.precision)}, {"recall", round6(s.recall)}, {"f", round6(s.f)}};
            if (opts.use_difficulty) {
                row["da_bertscore"] = {{"precision", round6(s.da_precision)},
                                       {"recall", round6(s.da_recall)},
                                       {"f", round6(s.da_f)}};
            }
            if (a.with_bleu) row["bleu"] = round6(bleu.at(s.name));
            j["systems"].push_back(std::move(row));
        }
        return dump(j);
    }
    std::ostringstream os;
    os << "system\tbertscore_p\tbertscore_r\tbertscore";
    if (opts.use_difficulty) os << "\tda_bertscore_p\tda_bertscore_r\tda_bertscore";
    if (a.with_bleu) os << "\tbleu";
    os << '\n';
    for (const auto& s : scores.systems) {
        os << s.name << '\t' << format_fixed(s.precision) << '\t' << format_fixed(s.recall) << '\t'
           << format_fixed(s.f);
        if (opts.use_difficulty) {
            os << '\t' << format_fixed(s.da_precision) << '\t' << format_fixed(s.da_recall) << '\t'
               << format_fixed(s.da_f);
        }
        if (a.with_bleu) os << '\t' << format_fixed(bleu.at(s.name));
        os << '\n';
    }
    return os.str();
}

// ---- correlate ---------------------------------------------------------------

struct CorrelateArgs {
    std::string scores;
    std::string human;
    TopArgs top;
    std::string tau = "a";
    std::vector<std::string> metrics;
    OutputArgs output;
};

TopKSelection to_selection(const TopArgs& t, double default_fraction) {
    if (t.k) return TopKSelection::of_count(*t.k);
    return TopKSelection::of_fraction(t.fraction.value_or(default_fraction));
}

std::string run_correlate(const CorrelateArgs& a) {
    const auto table = read_score_table(a.scores);
    const auto human = read_human_scores(a.human);
    const auto metrics = selected_metrics(table, a.metrics);
    const auto variant = parse_tau(a.tau);
    for (const auto& m : metrics) require_same_systems(table.column(m), human, "metric '" + m + "'");

    std::vector<std::string> all;
    for (const auto& [name, _] : human) all.push_back(name);
    const auto top = top_k_select(human, to_selection(a.top, 0.3));

    if (a.output.format == "json") {
        json j;
        j["command"] = "correlate";
        j["tau_variant"] = a.tau;
        j["top_systems"] = top;
        j["metrics"] = json::array();
        auto block = [](const CorrelationResult& r) {
            return json{{"n", r.n},
                        {"abs_r", maybe(r.pearson_r, true)},
                        {"abs_tau", maybe(r.kendall_tau, true)},
                        {"abs_rho", maybe(r.spearman_rho, true)}};
        };
        for (const auto& m : metrics) {
            const auto& col = table.column(m);
            j["metrics"].push_back({{"metric", m},
                                    {"all", block(correlate_subset(col, human, all, variant))},
                                    {"top", block(correlate_subset(col, human, top, variant))}});
        }
        return dump(j);
    }
    std::ostringstream os;
    os << "metric\tsubset\tn\tabs_r\tabs_tau\tabs_rho\n";
    for (const auto& m : metrics) {
        const auto& col = table.column(m);
        for (const auto& [label, subset] : {std::pair<const char*, const std::vector<std::string>*>{"all", &all}, {"top", &top}}) {
            const auto r = correlate_subset(col, human, *subset, variant);
            os << m << '\t' << label << '\t' << r.n << '\t' << cell(r.pearson_r, true) << '\t'
               << cell(r.kendall_tau, true) << '\t' << cell(r.spearman_rho, true) << '\n';
        }
    }
    return os.str();
}

// ---- sweep -------------------------------------------------------------------

struct SweepArgs {
    std::string scores;
    std::string human;
    std::size_t k_min = 2;
    std::optional<std::size_t> k_max;
    std::string tau = "a";
    std::vector<std::string> metrics;
    OutputArgs output;
};

std::string run_sweep(const SweepArgs& a) {
    const auto table = read_score_table(a.scores);
    const auto human = read_human_scores(a.human);
    const auto metrics = selected_metrics(table, a.metrics);
    const auto variant = parse_tau(a.tau);
    const std::size_t k_max = a.k_max.value_or(human.size());

    std::vector<std::pair<std::string, std::vector<SweepPoint>>> series;
    for (const auto& m : metrics) series.emplace_back(m, top_k_sweep(table.column(m), human, a.k_min, k_max, variant));

    if (a.output.format == "json") {
        json j;
        j["command"] = "sweep";
        j["tau_variant"] = a.tau;
        j["series"] = json::array();
        for (const auto& [m, points] : series) {
            json pts = json::array();
            for (const auto& p : points) {
                pts.push_back({{"k", p.k},
                               {"tau", maybe(p.result.kendall_tau, false)},
                               {"rho", maybe(p.result.spearman_rho, false)},
                               {"r", maybe(p.result.pearson_r, false)}});
            }
            j["series"].push_back({{"metric", m}, {"points", std::move(pts)}});
        }
        return dump(j);
    }
    std::ostringstream os;
    os << "metric\tk\ttau\trho\tr\n";
    for (const auto& [m, points] : series) {
        for (const auto& p : points) {
            os << m << '\t' << p.k << '\t' << cell(p.result.kendall_tau, false) << '\t'
               << cell(p.result.spearman_rho, false) << '\t' << cell(p.result.pearson_r, false) << '\n';
        }
    }
    return os.str();
}

// ---- difficulty --------------------------------------------------------------

struct DifficultyArgs {
    CorpusArgs corpus;
    OutputArgs output;
    std::size_t bins = 50;
    bool per_token = false;
    std::string human;
    TopArgs top;
};

std::string run_difficulty(const DifficultyArgs& a) {
    if (a.bins == 0) fail(ErrorCode::ConfigError, "--histogram-bins must be at least 1");
    auto systems = resolve_systems(a.corpus);
    if (a.top.fraction || a.top.k) {
        if (a.human.empty()) fail(ErrorCode::ConfigError, "--top-frac/--top-k need --human");
        const auto human = read_human_scores(a.human);
        ScoreMap present;
        for (const auto& s : systems) present[s.name] = 0.0;
        require_same_systems(present, human, "difficulty subset");
        const auto top = top_k_select(human, to_selection(a.top, 1.0));
        const std::set<std::string> keep(top.begin(), top.end());
        std::erase_if(systems, [&](const SystemSource& s) { return !keep.count(s.name); });
    }
    const auto corpus = load_bound_corpus(a.corpus, systems);
    const auto maps = corpus_difficulty(corpus, threads_from_env());

    const double width = 2.0 / static_cast<double>(a.bins);
    std::vector<std::size_t> counts(a.bins, 0);
    std::size_t total = 0;
    double sum = 0.0;
    for (const auto& m : maps) {
        for (double w : m.weights) {
            const double clipped = std::clamp(w, 0.0, 2.0);
            const auto bin = std::min(a.bins - 1, static_cast<std::size_t>(clipped / width));
            ++counts[bin];
            sum += w;
            ++total;
        }
    }
    const double mean = total ? sum / static_cast<double>(total) : 0.0;

    if (a.output.format == "json") {
        json j;
        j["command"] = "difficulty";
        json names = json::array();
        for (const auto& s : corpus.systems) names.push_back(s.name);
        j["systems"] = std::move(names);
        j["k_systems"] = corpus.system_count();
        j["token_count"] = total;
        j["mean_weight"] = round6(mean);
        j["histogram"] = json::array();
        for (std::size_t b = 0; b < a.bins; ++b) {
            j["histogram"].push_back({{"lower", round6(width * static_cast<double>(b))}, {"count", counts[b]}});
        }
        if (a.per_token) {
            j["tokens"] = json::array();
            for (const auto& m : maps) {
                for (std::size_t i = 0; i < m.weights.size(); ++i) {
                    j["tokens"].push_back({{"segment", m.segment_index},
                                           {"index", i},
                                           {"token", m.ref_tokens[i]},
                                           {"weight", round6(m.weights[i])}});
                }
            }
        }
        return dump(j);
    }
    std::ostringstream os;
    if (a.per_token) {
        os << "segment\ttoken_index\ttoken\tweight\n";
        for (const auto& m : maps) {
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
                os << m.segment_index << '\t' << i << '\t' << escape_tsv(m.ref_tokens[i]) << '\t'
                   << format_fixed(m.weights[i]) << '\n';
            }
        }
    } else {
        os << "bin_lower\tcount\n";
        for (std::size_t b = 0; b < a.bins; ++b) {
            os << format_fixed(width * static_cast<double>(b)) << '\t' << counts[b] << '\n';
        }
    }
    return os.str();
}

// ---- rank-report -------------------------------------------------------------

struct RankArgs {
    std::string scores;
    std::string human;
    std::vector<std::string> directions;
    std::vector<std::string> metrics;
    OutputArgs output;
};

std::string run_rank_report(const RankArgs& a, std::ostream& err) {
    const auto table = read_score_table(a.scores);
    const auto human = read_human_scores(a.human);
    const auto metrics = selected_metrics(table, a.metrics);
    std::map<std::string, Direction> direction;
    for (const auto& item : a.directions) {
        const auto eq = item.find('=');
        const std::string name = item.substr(0, eq);
        const std::string dir = eq == std::string::npos ? "" : item.substr(eq + 1);
        if (dir != "higher" && dir != "lower") {
            fail(ErrorCode::ConfigError, "--direction expects METRIC=higher|lower, got '" + item + "'");
        }
        table.column(name);
        direction[name] = dir == "lower" ? Direction::LowerBetter : Direction::HigherBetter;
    }

    std::vector<std::pair<std::string, RankReport>> reports;
    for (const auto& m : metrics) {
        const auto it = direction.find(m);
        reports.emplace_back(m, rank_report(table.column(m), human,
                                            it == direction.end() ? Direction::HigherBetter : it->second));
    }
    auto tie_text = [](const std::vector<std::string>& group) {
        std::string s;
        for (const auto& g : group) s += (s.empty() ? "" : ",") + g;
        return s;
    };
    // Ties are resolved by name; say so on the diagnostic stream.
    for (const auto& [m, r] : reports) {
        for (const auto& g : r.metric_ties) err << "WARNING tie: metric " << m << " ranks " << tie_text(g) << " by name\n";
    }
    if (!reports.empty()) {
        for (const auto& g : reports.front().second.human_ties) err << "WARNING tie: human ranks " << tie_text(g) << " by name\n";
    }

    if (a.output.format == "json") {
        json j;
        j["command"] = "rank-report";
        j["metrics"] = json::array();
        for (const auto& [m, r] : reports) {
            json rows = json::array();
            for (const auto& e : r.entries) {
                rows.push_back({{"system", e.system},
                                {"score", round6(e.metric_score)},
                                {"human", round6(e.human_score)},
                                {"metric_rank", e.metric_rank},
                                {"human_rank", e.human_rank},
                                {"delta", e.delta}});
            }
            const auto it = direction.find(m);
            j["metrics"].push_back(
                {{"metric", m},
                 {"direction", it != direction.end() && it->second == Direction::LowerBetter ? "lower" : "higher"},
                 {"systems", std::move(rows)},
                 {"sum_abs_delta", r.sum_abs_delta},
                 {"metric_ties", r.metric_ties},
                 {"human_ties", r.human_ties}});
        }
        return dump(j);
    }
    std::ostringstream os;
    os << "system\thuman\thuman_rank";
    for (const auto& [m, _] : reports) os << '\t' << m << '\t' << m << "_rank\t" << m << "_delta";
    os << '\n';
    if (reports.empty()) return os.str();
    const auto& lead = reports.front().second.entries;
    for (std::size_t i = 0; i < lead.size(); ++i) {
        os << lead[i].system << '\t' << format_fixed(lead[i].human_score) << '\t' << lead[i].human_rank;
        for (const auto& [m, r] : reports) {
            const auto& e = r.entries[i];
            os << '\t' << format_fixed(e.metric_score) << '\t' << e.metric_rank << '\t' << e.delta;
        }
        os << '\n';
    }
    os << "sum_abs_delta\t\t";
    for (const auto& [m, r] : reports) os << "\t\t\t" << r.sum_abs_delta;
    os << '\n';
    return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Difficulty-aware embedding-based MT evaluation and metric meta-evaluation", "damteval"};
    app.require_subcommand(1);

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Per-system BERTScore and DA-BERTScore");
    add_corpus_options(score_cmd, score.corpus);
    add_output_options(score_cmd, score.output);
    score_cmd->add_flag("--no-difficulty", score.no_difficulty, "Vanilla scores only");
    score_cmd->add_flag("--exclude-self", score.exclude_self, "Leave the scored system out of its difficulty");
    score_cmd->add_flag("--with-bleu", score.with_bleu, "Add a corpus BLEU column");

    auto add_table_inputs = [](CLI::App* cmd, std::string& scores, std::string& human,
                               std::vector<std::string>& metrics) {
        cmd->add_option("--scores", scores, "Metric score TSV (system column + metric columns)")->required();
        cmd->add_option("--human", human, "Human scores TSV (system<TAB>score)")->required();
        cmd->add_option("--metric", metrics, "Restrict to these metric columns (repeatable)");
    };

    CorrelateArgs corr;
    auto* corr_cmd = app.add_subcommand("correlate", "|r|, |tau|, |rho| against human scores");
    add_table_inputs(corr_cmd, corr.scores, corr.human, corr.metrics);
    auto* frac_opt = corr_cmd->add_option("--top-frac", corr.top.fraction, "Top subset as a fraction (default 0.3)");
    corr_cmd->add_option("--top-k", corr.top.k, "Top subset size")->excludes(frac_opt);
    corr_cmd->add_option("--tau", corr.tau, "Kendall variant")->check(CLI::IsMember({"a", "b"}));
    add_output_options(corr_cmd, corr.output);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Correlations on the top-k systems for a range of k");
    add_table_inputs(sweep_cmd, sweep.scores, sweep.human, sweep.metrics);
    sweep_cmd->add_option("--k-min", sweep.k_min, "Smallest k (default 2)");
    sweep_cmd->add_option("--k-max", sweep.k_max, "Largest k (default: all systems)");
    sweep_cmd->add_option("--tau", sweep.tau, "Kendall variant")->check(CLI::IsMember({"a", "b"}));
    add_output_options(sweep_cmd, sweep.output);

    DifficultyArgs diff;
    auto* diff_cmd = app.add_subcommand("difficulty", "Export token difficulty weights and their histogram");
    add_corpus_options(diff_cmd, diff.corpus);
    add_output_options(diff_cmd, diff.output);
    diff_cmd->add_option("--histogram-bins", diff.bins, "Histogram bins over [0, 2] (default 50)");
    diff_cmd->add_flag("--per-token", diff.per_token, "Per-token weights instead of the histogram");
    diff_cmd->add_option("--human", diff.human, "Human scores, for restricting to the top systems");
    auto* dfrac = diff_cmd->add_option("--top-frac", diff.top.fraction, "Use only this fraction of best systems");
    diff_cmd->add_option("--top-k", diff.top.k, "Use only the k best systems")->excludes(dfrac);

    RankArgs rank;
    auto* rank_cmd = app.add_subcommand("rank-report", "System ranks and rank differences against human ranks");
    add_table_inputs(rank_cmd, rank.scores, rank.human, rank.metrics);
    rank_cmd->add_option("--direction", rank.directions, "METRIC=higher|lower (repeatable)");
    add_output_options(rank_cmd, rank.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ERROR UsageError: " << e.what() << '\n';
        return 2;
    }

    try {
        if (score_cmd->parsed()) emit(run_score(score), score.output, out);
        if (corr_cmd->parsed()) emit(run_correlate(corr), corr.output, out);
        if (sweep_cmd->parsed()) emit(run_sweep(sweep), sweep.output, out);
        if (diff_cmd->parsed()) emit(run_difficulty(diff), diff.output, out);
        if (rank_cmd->parsed()) emit(run_rank_report(rank, err), rank.output, out);
    } catch (const Error& e) {
        err << "ERROR " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace damteval
