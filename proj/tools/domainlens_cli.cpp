// Command-line driver: ingest, featurize, train-eval, graph and social runs.

#include "domainlens/community.hpp"
#include "domainlens/corpus.hpp"
#include "domainlens/error.hpp"
#include "domainlens/linkgraph.hpp"
#include "domainlens/model_io.hpp"
#include "domainlens/pipeline.hpp"
#include "domainlens/psl.hpp"
#include "domainlens/social.hpp"
#include "domainlens/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace domainlens;

namespace {

struct Options {
    std::uint64_t seed = 42;
    std::size_t workers = default_workers();
    std::string output = "domainlens-out";

    std::string corpus;
    std::vector<std::string> labels;
    std::string label_mode = "explicit";
    std::string features;
    std::string dump;
    std::string model;
    std::string channels = "meta,content,hyperlinks,amalgamated";
    double df_min = 0.10;
    double df_max = 0.90;
    std::size_t top_k = 500;
    bool keep_non_english = false;

    // ingest --synthetic
    bool synthetic = false;
    std::size_t n_info = 414;
    std::size_t n_disinfo = 186;
    std::size_t signal_terms = 30;
    std::size_t pages = 3;
    std::size_t vocab_size = 1500;
    double homophily = 0.8;
    std::vector<std::size_t> clone_networks;

    // train-eval
    std::size_t splits = 100;
    double train_frac = 0.9;
    bool grid_search = false;
    bool global_selection = false;
    double c_text = 29.76;
    double c_link = 10000.0;
    double c_amalgamated = 29.76;
    std::string penalty = "l2";
    std::string networks;
    std::string model_channels = "amalgamated";

    // graph
    std::string graph;
    std::string direction = "in";
    std::size_t top = 5;
    std::string filter = "any";
    std::string target;
    std::string format = "dot";
    std::size_t min_size = 3;

    // social
    double jaccard_threshold = 0.03;
    std::string method = "louvain";
    std::string community_graph = "forward";
    std::string candidates;
};

// Collects every file a command writes and emits the run index files.
class RunOutput {
public:
    explicit RunOutput(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw config_error("UnwritablePath", dir_.string() + ": " + ec.message());
    }

    const fs::path& dir() const { return dir_; }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw config_error("UnwritablePath", path.string());
        out << content;
        record(name);
    }

    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    void record(const std::string& name) { files_.push_back(name); }

    void finish(const std::string& command, const Options& opt, const std::string& config_snapshot,
                const std::vector<std::string>& argv, double elapsed) {
        write("config_snapshot.ini", config_snapshot);
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        write_json("run_metadata.json", {{"command", command},
                                         {"argv", argv},
                                         {"seed", opt.seed},
                                         {"workers", opt.workers},
                                         {"finished_at", stamp},
                                         {"elapsed_seconds", elapsed}});
        std::vector<std::string> files = files_;
        files.push_back("manifest.json");
        std::sort(files.begin(), files.end());
        files.erase(std::unique(files.begin(), files.end()), files.end());
        json manifest{{"command", command}, {"seed", opt.seed}, {"files", files}};
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("MissingInput", "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LabelSet load_labels(const std::vector<std::string>& paths, const std::string& mode) {
    if (paths.empty()) throw config_error("MissingInput", "no label list given (--labels)");
    LabelMode m;
    if (mode == "explicit") m = LabelMode::ExplicitLabels;
    else if (mode == "score") m = LabelMode::ScoreThreshold;
    else throw config_error("InvalidArgument", "label mode must be explicit or score");
    LabelSet merged;
    for (const auto& p : paths) {
        if (!fs::exists(p)) throw config_error("MissingInput", "label list " + p + " does not exist");
        auto part = load_label_list(p, m);
        for (const auto& [domain, entry] : part.entries()) merged.add(domain, entry);
    }
    return merged;
}

std::vector<DomainRecord> load_records(const Options& opt, const LabelSet& labels, LoadStats* stats,
                                       std::size_t* non_english) {
    if (opt.corpus.empty()) throw config_error("MissingInput", "no corpus root given (--corpus)");
    auto records = load_corpus(opt.corpus, labels, opt.workers, stats);
    std::size_t flagged = opt.keep_non_english ? 0 : flag_non_english(records, english_stopwords());
    if (non_english) *non_english = flagged;
    return records;
}

PipelineConfig pipeline_config(const Options& opt) {
    PipelineConfig cfg;
    cfg.band = {opt.df_min, opt.df_max};
    cfg.top_k = opt.top_k;
    cfg.text_hp.C = opt.c_text;
    cfg.link_hp.C = opt.c_link;
    cfg.amalgamated_hp.C = opt.c_amalgamated;
    const Penalty p = penalty_from_string(opt.penalty);
    cfg.text_hp.penalty = cfg.link_hp.penalty = cfg.amalgamated_hp.penalty = p;
    cfg.global_selection = opt.global_selection;
    cfg.grid_search = opt.grid_search;
    return cfg;
}

std::vector<ChannelSet> evaluated_channels(const std::string& list) {
    std::vector<ChannelSet> out;
    std::stringstream ss(list);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(ChannelSet::parse(std::string(trim(part))));
    if (out.empty()) throw config_error("InvalidArgument", "no channels given");
    return out;
}

ChannelSet channel_union(const std::vector<ChannelSet>& sets) {
    ChannelSet u;
    for (const auto& s : sets) {
        u.meta |= s.meta;
        u.content |= s.content;
        u.link |= s.link;
    }
    return u;
}

GraphFormat parse_format(const std::string& f) {
    if (f == "dot") return GraphFormat::Dot;
    if (f == "graphml") return GraphFormat::GraphML;
    if (f == "csv") return GraphFormat::EdgeCsv;
    throw config_error("InvalidArgument", "graph format must be dot, graphml or csv");
}

std::string format_extension(GraphFormat f) {
    return f == GraphFormat::Dot ? "dot" : f == GraphFormat::GraphML ? "graphml" : "csv";
}

LabelFilter parse_filter(const std::string& f) {
    if (f == "any") return any_label();
    if (f == "info") return only(Label::Info);
    if (f == "disinfo") return only(Label::Disinfo);
    if (f == "labeled") return labeled_only();
    throw config_error("InvalidArgument", "filter must be any, info, disinfo or labeled");
}

json summary_counts(const std::vector<DomainRecord>& records, const LoadStats& stats, std::size_t non_english) {
    std::map<std::string, std::size_t> excluded;
    std::map<std::string, std::map<std::string, std::size_t>> by_label;
    std::size_t ok = 0;
    for (const auto& r : records) {
        const std::string label(to_string(r.label));
        if (r.ok()) {
            ++ok;
            ++by_label[label]["ok"];
        } else {
            ++excluded[std::string(to_string(r.reason))];
            ++by_label[label]["excluded"];
        }
    }
    return {{"total", records.size()},
            {"ok", ok},
            {"excluded", excluded},
            {"by_label", by_label},
            {"non_english_flagged", non_english},
            {"unreadable_pages", stats.unreadable_pages}};
}

// ---- ingest ---------------------------------------------------------------

void cmd_ingest(const Options& opt, RunOutput& out) {
    Options o = opt;
    if (opt.synthetic) {
        SyntheticCorpusConfig cfg;
        cfg.n_info = opt.n_info;
        cfg.n_disinfo = opt.n_disinfo;
        cfg.signal_terms_per_class = opt.signal_terms;
        cfg.pages_per_domain = opt.pages;
        cfg.vocab_size = opt.vocab_size;
        cfg.homophily = opt.homophily;
        cfg.clone_networks = opt.clone_networks;
        cfg.seed = opt.seed;
        auto corpus = generate_synthetic_corpus(cfg);
        const fs::path root = out.dir() / "corpus";
        fs::remove_all(root);
        write_corpus(root, corpus.records);
        for (const auto& r : corpus.records) out.record("corpus/" + r.domain);
        write_label_list(out.dir() / "labels.csv", corpus.labels);
        out.record("labels.csv");
        out.write("networks.csv", network_map_csv(corpus.network_of));
        o.corpus = root.string();
        o.labels = {(out.dir() / "labels.csv").string()};
        o.label_mode = "explicit";
    }
    auto labels = load_labels(o.labels, o.label_mode);
    LoadStats stats;
    std::size_t non_english = 0;
    auto records = load_records(o, labels, &stats, &non_english);
    out.write_json("ingest_summary.json", summary_counts(records, stats, non_english));
    std::string csv = "domain,label,status,reason,pages\n";
    for (const auto& r : records)
        csv += r.domain + ',' + std::string(to_string(r.label)) + ',' + (r.ok() ? "ok" : "excluded") + ',' +
               std::string(to_string(r.reason)) + ',' + std::to_string(r.pages.size()) + '\n';
    out.write("records.csv", csv);
    std::cout << "ingested " << records.size() << " domains into " << out.dir().string() << "\n";
}

// ---- featurize -------------------------------------------------------------

void cmd_featurize(const Options& opt, RunOutput& out) {
    auto labels = load_labels(opt.labels, opt.label_mode);
    LoadStats stats;
    auto records = load_records(opt, labels, &stats, nullptr);
    auto signals = extract_signals(records, opt.workers);
    auto built = build_dataset(signals, labels, PublicSuffixList::bundled(), english_stopwords(), opt.workers);
    const ChannelSet enabled = channel_union(evaluated_channels(opt.channels));
    const auto cfg = pipeline_config(opt);

    FittedPipeline fitted;
    try {
        std::vector<std::size_t> rows(built.dataset.size());
        std::iota(rows.begin(), rows.end(), 0);
        fitted = fit_pipeline(built.dataset, rows, enabled, cfg);
    } catch (const Error& e) {
        if (e.code() == "EmptyVocabulary")
            std::cerr << "hint: no term passes the document-frequency band; widen --df-min/--df-max or add domains\n";
        throw;
    }

    out.write("dataset.json", to_json(built.dataset).dump() + "\n");
    write_label_list(out.dir() / "labels.csv", labels);
    out.record("labels.csv");
    out.write("graph.csv", export_graph(built.graph, GraphFormat::EdgeCsv));

    json summary{{"rows", built.dataset.size()},
                 {"graph_nodes", built.graph.node_count()},
                 {"graph_edges", built.graph.edge_count()}};
    for (const auto* t : {fitted.meta ? &*fitted.meta : nullptr, fitted.content ? &*fitted.content : nullptr}) {
        if (!t) continue;
        const std::string name(to_string(t->channel));
        auto single = fitted.restrict(ChannelSet::single(t->channel == TextChannel::Meta ? FeatureChannel::Meta
                                                                                          : FeatureChannel::Content));
        out.write("features_" + name + ".csv", feature_matrix_csv(single.transform(built.dataset)));
        json vocab = vocabulary_to_json(t->vocab, &t->maxima);
        json selected = json::array();
        for (std::size_t c : t->selected) selected.push_back(t->vocab.terms[c]);
        vocab["selected"] = selected;
        out.write_json("vocab_" + name + ".json", vocab);
        summary[name] = {{"vocabulary", t->vocab.size()},
                         {"selected", t->selected.size()},
                         {"selection_converged", t->selection_converged}};
    }
    if (enabled.link) {
        std::vector<std::size_t> rows(built.dataset.size());
        std::iota(rows.begin(), rows.end(), 0);
        out.write("features_link.csv", feature_matrix_csv(link_matrix(built.dataset, rows)));
    }
    out.write_json("featurize_summary.json", summary);
    std::cout << "featurized " << built.dataset.size() << " labeled domains\n";
}

// ---- train-eval -------------------------------------------------------------

Dataset load_dataset(const Options& opt) {
    if (opt.features.empty()) throw config_error("MissingInput", "no featurize output given (--features)");
    const fs::path path = fs::path(opt.features) / "dataset.json";
    try {
        return dataset_from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
        throw data_error("DatasetFormat", path.string() + ": " + e.what());
    }
}

void cmd_train_eval(const Options& opt, RunOutput& out) {
    const auto ds = load_dataset(opt);
    const auto cfg = pipeline_config(opt);
    SplitConfig split{opt.splits, opt.train_frac, opt.seed, opt.workers};
    const auto evaluated = evaluated_channels(opt.channels);
    auto reports = repeated_split_eval(ds, evaluated, cfg, split);

    json jr = json::array();
    for (const auto& r : reports) jr.push_back(to_json(r));
    out.write_json("eval_report.json", jr);
    const auto table = eval_table(reports);
    out.write("eval_table.txt", table);
    std::cout << table;

    const auto model_channels = ChannelSet::parse(opt.model_channels);
    auto deployed = train_deployed(ds, model_channels, cfg, opt.seed);
    out.write_json("model.json", to_json(deployed));

    json terms = json::object();
    for (const auto* t : {deployed.pipeline.meta ? &*deployed.pipeline.meta : nullptr,
                          deployed.pipeline.content ? &*deployed.pipeline.content : nullptr}) {
        if (!t) continue;
        auto list = [](const std::vector<std::pair<std::string, double>>& v) {
            json a = json::array();
            for (const auto& [term, w] : v) a.push_back({{"term", term}, {"coef", w}});
            return a;
        };
        terms[std::string(to_string(t->channel))] = {{"disinfo", list(t->top_terms(10, true))},
                                                     {"info", list(t->top_terms(10, false))}};
    }
    out.write_json("top_terms.json", terms);

    if (!opt.networks.empty()) {
        const auto networks = parse_network_map(read_file(opt.networks));
        const auto base = repeated_split_eval(ds, model_channels, cfg, split);
        const auto dedup = dedup_network_retrain(ds, networks, model_channels, cfg, split);
        auto delta = [](const std::optional<MetricSummary>& a, const std::optional<MetricSummary>& b) -> json {
            if (!a || !b) return nullptr;
            return b->mean - a->mean;
        };
        json change{{"accuracy", delta(base.accuracy, dedup.accuracy)},
                    {"precision", delta(base.precision, dedup.precision)},
                    {"recall", delta(base.recall, dedup.recall)},
                    {"f1", delta(base.f1, dedup.f1)}};
        out.write_json("dedup_report.json", {{"baseline", to_json(base)},
                                             {"dedup", to_json(dedup)},
                                             {"rows_removed", base.n_rows - dedup.n_rows},
                                             {"disinfo_rows_removed", base.n_disinfo - dedup.n_disinfo},
                                             {"mean_change", change}});
        const EvalReport pair[] = {base, dedup};
        std::cout << eval_table(pair);
    }
}

// ---- graph -------------------------------------------------------------------

LinkGraph load_graph(const Options& opt) {
    fs::path path = opt.graph;
    if (path.empty()) {
        if (opt.features.empty()) throw config_error("MissingInput", "no graph given (--graph or --features)");
        path = fs::path(opt.features) / "graph.csv";
    }
    return parse_edge_csv(read_file(path));
}

void write_ranking(RunOutput& out, const std::string& name, const std::vector<RankedNode>& rows) {
    std::string csv = "domain,degree\n";
    for (const auto& r : rows) csv += r.domain + ',' + std::to_string(r.degree) + '\n';
    out.write(name, csv);
    std::cout << csv;
}

void cmd_graph_rank(const Options& opt, RunOutput& out) {
    auto g = load_graph(opt);
    Direction dir;
    if (opt.direction == "in") dir = Direction::In;
    else if (opt.direction == "out") dir = Direction::Out;
    else throw config_error("InvalidArgument", "direction must be in or out");
    write_ranking(out, "rank_" + opt.direction + ".csv", degree_ranking(g, dir, parse_filter(opt.filter), opt.top));
}

void cmd_graph_subgraph(const Options& opt, RunOutput& out) {
    auto g = load_graph(opt);
    if (opt.target.empty()) throw config_error("MissingInput", "no target domain given (--target)");
    auto sub = induced_in_subgraph(g, opt.target, parse_filter(opt.filter));
    const auto f = parse_format(opt.format);
    out.write("subgraph." + format_extension(f), export_graph(sub, f));
    std::cout << "subgraph: " << sub.node_count() << " nodes, " << sub.edge_count() << " edges\n";
}

void cmd_graph_cliques(const Options& opt, RunOutput& out) {
    auto g = load_graph(opt);
    auto clusters = find_dense_clusters(g, opt.min_size);
    out.write_json("cliques.json", {{"min_size", opt.min_size}, {"clusters", clusters}});
    std::cout << clusters.size() << " clusters of size >= " << opt.min_size << "\n";
}

void cmd_graph_adjacency(const Options& opt, RunOutput& out) {
    auto g = load_graph(opt);
    std::vector<std::string> label_paths = opt.labels;
    if (label_paths.empty() && !opt.features.empty()) label_paths.push_back((fs::path(opt.features) / "labels.csv").string());
    auto labels = load_labels(label_paths, opt.label_mode);
    auto m = export_adjacency(g, labels);
    out.write("adjacency.csv", adjacency_csv(m));
    out.write("adjacency_keys.csv", adjacency_keys_csv(m));
    out.write("adjacency.bin", adjacency_binary(m));
    std::cout << "adjacency: " << m.size() << " x " << m.size() << " (" << m.info_count << " info)\n";
}

void cmd_graph_export(const Options& opt, RunOutput& out) {
    auto g = load_graph(opt);
    const auto f = parse_format(opt.format);
    out.write("graph." + format_extension(f), export_graph(g, f));
}

// ---- social ------------------------------------------------------------------

MessageDump require_dump(const Options& opt) {
    if (opt.dump.empty()) throw config_error("MissingInput", "no message dump given (--dump)");
    if (!fs::exists(opt.dump)) throw config_error("MissingInput", "message dump " + opt.dump + " does not exist");
    return load_dump(opt.dump);
}

void cmd_social_forwardgraph(const Options& opt, RunOutput& out) {
    auto g = build_forward_graph(require_dump(opt));
    const auto f = parse_format(opt.format);
    out.write("forward_graph." + format_extension(f), export_graph(g, f));
    write_ranking(out, "forward_indegree.csv", degree_ranking(g, Direction::In, any_label(), std::max<std::size_t>(g.node_count(), 1)));
}

void cmd_social_communities(const Options& opt, RunOutput& out) {
    auto dump = require_dump(opt);
    UndirectedGraph g;
    if (opt.community_graph == "forward") g = to_undirected(build_forward_graph(dump));
    else if (opt.community_graph == "jaccard")
        g = jaccard_share_graph(actor_domains(dump, PublicSuffixList::bundled()), opt.jaccard_threshold, opt.workers);
    else throw config_error("InvalidArgument", "community graph must be forward or jaccard");
    Partition p;
    if (opt.method == "louvain") p = louvain(g, opt.seed);
    else if (opt.method == "lpa") p = label_propagation(g, opt.seed);
    else throw config_error("InvalidArgument", "method must be louvain or lpa");
    out.write_json("partition.json", to_json(p));
    std::string csv = "node,community\n";
    for (std::size_t i = 0; i < p.nodes.size(); ++i) csv += p.nodes[i] + ',' + std::to_string(p.community_of[i]) + '\n';
    out.write("partition.csv", csv);
    std::cout << p.community_count() << " communities, modularity " << p.modularity << "\n";
}

void cmd_social_sharers(const Options& opt, RunOutput& out) {
    auto dump = require_dump(opt);
    auto labels = load_labels(opt.labels, opt.label_mode);
    auto rows = top_sharers(dump, labels, PublicSuffixList::bundled(), opt.top);
    std::string csv = "actor,unique_disinfo,disinfo_count,distinct_domains\n";
    json arr = json::array();
    for (const auto& r : rows) {
        csv += r.actor_id + ',' + std::to_string(r.unique_disinfo) + ',' + std::to_string(r.disinfo_count) + ',' +
               std::to_string(r.shared_domains.size()) + '\n';
        arr.push_back(to_json(r));
    }
    out.write("sharers.csv", csv);
    out.write_json("sharers.json", arr);
    std::cout << csv;
}

void cmd_social_jaccard(const Options& opt, RunOutput& out) {
    auto dump = require_dump(opt);
    auto g = jaccard_share_graph(actor_domains(dump, PublicSuffixList::bundled()), opt.jaccard_threshold, opt.workers);
    const auto f = parse_format(opt.format);
    out.write("jaccard." + format_extension(f), export_graph(g, f));
    std::cout << "jaccard graph: " << g.node_count() << " domains, " << g.edge_count() << " edges\n";
}

void cmd_social_discover(const Options& opt, RunOutput& out) {
    if (opt.model.empty()) throw config_error("MissingInput", "discover needs a trained model (--model)");
    auto dump = require_dump(opt);
    auto model = deployed_model_from_json(json::parse(read_file(opt.model)));
    auto labels = load_labels(opt.labels, opt.label_mode);
    auto known_records = load_records(opt, labels, nullptr, nullptr);
    auto known_signals = extract_signals(known_records, opt.workers);
    std::vector<DomainRecord> candidates;
    if (!opt.candidates.empty()) {
        if (!fs::is_directory(opt.candidates))
            throw config_error("MissingInput", "candidate corpus " + opt.candidates + " does not exist");
        candidates = load_corpus(opt.candidates, LabelSet{}, opt.workers);
    }
    auto rows = discover_candidate_domains(dump, labels, model, known_signals, candidates, PublicSuffixList::bundled(),
                                           english_stopwords());
    std::string csv = "domain,share_count,status,prediction,margin,note\n";
    json arr = json::array();
    for (const auto& r : rows) {
        csv += r.domain + ',' + std::to_string(r.share_count) + ',' +
               (r.status == CandidateStatus::Scored ? "scored" : "unscored") + ',' +
               (r.prediction ? std::string(to_string(*r.prediction)) : "") + ',' +
               (r.margin ? format_double(*r.margin) : "") + ',' + r.note + '\n';
        arr.push_back(to_json(r));
    }
    out.write("discover.csv", csv);
    out.write_json("discover.json", arr);
    std::cout << csv;
}

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return 2;
        case ErrorCategory::Data: return 3;
        default: return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Domain classification and link/sharing graph analysis toolkit"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file; command-line flags win");
    Options opt;

    app.add_option("--seed", opt.seed, "Random seed (recorded in every output)")->capture_default_str();
    app.add_option("--workers", opt.workers, "Worker threads")->capture_default_str();
    app.add_option("--output", opt.output, "Output directory")->capture_default_str();
    app.add_option("--corpus", opt.corpus, "Corpus root (one directory per domain)");
    app.add_option("--labels", opt.labels, "Label list CSV (repeatable)");
    app.add_option("--label-mode", opt.label_mode, "explicit | score")->capture_default_str();
    app.add_option("--features", opt.features, "Output directory of a featurize run");
    app.add_option("--dump", opt.dump, "Message dump (JSONL)");
    app.add_option("--model", opt.model, "Model artifact (model.json)");
    app.add_option("--channels", opt.channels, "Comma-separated: meta, content, hyperlinks, amalgamated")
        ->capture_default_str();
    app.add_option("--df-min", opt.df_min, "Lower document-frequency bound (fraction)")->capture_default_str();
    app.add_option("--df-max", opt.df_max, "Upper document-frequency bound (fraction)")->capture_default_str();
    app.add_option("--top-k", opt.top_k, "Selected terms per text channel")->capture_default_str();
    app.add_flag("--keep-non-english", opt.keep_non_english, "Skip the stopword-coverage language filter");
    app.add_option("--jaccard-threshold", opt.jaccard_threshold, "Co-sharing Jaccard threshold")->capture_default_str();
    app.add_option("--min-size", opt.min_size, "Minimum clique size")->capture_default_str();
    app.add_option("--format", opt.format, "Graph format: dot | graphml | csv")->capture_default_str();
    app.add_option("--top", opt.top, "Rows in ranked outputs")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "Load (or generate) a corpus and summarize it");
    ingest->add_flag("--synthetic", opt.synthetic, "Generate a planted-signal corpus under <output>/corpus first");
    ingest->add_option("--n-info", opt.n_info)->capture_default_str();
    ingest->add_option("--n-disinfo", opt.n_disinfo)->capture_default_str();
    ingest->add_option("--signal-terms", opt.signal_terms)->capture_default_str();
    ingest->add_option("--pages", opt.pages)->capture_default_str();
    ingest->add_option("--vocab-size", opt.vocab_size)->capture_default_str();
    ingest->add_option("--homophily", opt.homophily)->capture_default_str();
    ingest->add_option("--clone-network", opt.clone_networks, "Size of a mutually linked disinfo network (repeatable)");

    auto* featurize = app.add_subcommand("featurize", "Tokenize, build vocabularies and link features");

    auto* train = app.add_subcommand("train-eval", "Repeated-split evaluation and final model");
    train->add_option("--splits", opt.splits)->capture_default_str();
    train->add_option("--train-frac", opt.train_frac)->capture_default_str();
    train->add_flag("--grid-search", opt.grid_search, "5-fold CV grid search per fit");
    train->add_flag("--global-selection", opt.global_selection, "Fit vocabulary and selection once on all rows");
    train->add_option("--c-text", opt.c_text)->capture_default_str();
    train->add_option("--c-link", opt.c_link)->capture_default_str();
    train->add_option("--c-amalgamated", opt.c_amalgamated)->capture_default_str();
    train->add_option("--penalty", opt.penalty, "l2 | l1")->capture_default_str();
    train->add_option("--networks", opt.networks, "domain,network CSV; adds the one-domain-per-network run");
    train->add_option("--model-channels", opt.model_channels, "Channels of the saved model")->capture_default_str();

    auto* graph = app.add_subcommand("graph", "Hyperlink graph analyses");
    graph->require_subcommand(1);
    graph->add_option("--graph", opt.graph, "Edge CSV (defaults to <features>/graph.csv)");
    auto* rank = graph->add_subcommand("rank", "Degree ranking");
    rank->add_option("--direction", opt.direction, "in | out")->capture_default_str();
    rank->add_option("--filter", opt.filter, "any | info | disinfo | labeled")->capture_default_str();
    auto* subgraph = graph->add_subcommand("subgraph", "Target plus its (filtered) in-neighbors");
    subgraph->add_option("--target", opt.target)->required();
    subgraph->add_option("--filter", opt.filter)->capture_default_str();
    auto* cliques = graph->add_subcommand("cliques", "Maximal mutual-link cliques");
    auto* adjacency = graph->add_subcommand("adjacency", "Labeled adjacency matrix export");
    auto* gexport = graph->add_subcommand("export", "Whole-graph export");

    auto* social = app.add_subcommand("social", "Message-dump analyses");
    social->require_subcommand(1);
    auto* fwd = social->add_subcommand("forwardgraph", "Channel forwarding graph");
    auto* communities = social->add_subcommand("communities", "Community detection");
    communities->add_option("--method", opt.method, "louvain | lpa")->capture_default_str();
    communities->add_option("--graph", opt.community_graph, "forward | jaccard")->capture_default_str();
    auto* sharers = social->add_subcommand("sharers", "Top disinfo sharers");
    auto* jaccard = social->add_subcommand("jaccard", "Domain co-sharing graph");
    auto* discover = social->add_subcommand("discover", "Score shared domains missing from the label lists");
    discover->add_option("--candidates", opt.candidates, "Corpus root holding candidate domain pages");

    std::vector<std::string> args(argv, argv + argc);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        RunOutput out(opt.output);
        std::string command;
        auto run = [&](const std::string& name, auto fn) {
            command = name;
            fn(opt, out);
        };
        if (*ingest) run("ingest", cmd_ingest);
        else if (*featurize) run("featurize", cmd_featurize);
        else if (*train) run("train-eval", cmd_train_eval);
        else if (*rank) run("graph rank", cmd_graph_rank);
        else if (*subgraph) run("graph subgraph", cmd_graph_subgraph);
        else if (*cliques) run("graph cliques", cmd_graph_cliques);
        else if (*adjacency) run("graph adjacency", cmd_graph_adjacency);
        else if (*gexport) run("graph export", cmd_graph_export);
        else if (*fwd) run("social forwardgraph", cmd_social_forwardgraph);
        else if (*communities) run("social communities", cmd_social_communities);
        else if (*sharers) run("social sharers", cmd_social_sharers);
        else if (*jaccard) run("social jaccard", cmd_social_jaccard);
        else if (*discover) run("social discover", cmd_social_discover);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        out.finish(command, opt, app.config_to_str(true, false), args, elapsed);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
