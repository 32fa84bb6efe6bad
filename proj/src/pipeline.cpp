#include "domainlens/pipeline.hpp"

#include "domainlens/error.hpp"
#include "domainlens/html.hpp"

#include <algorithm>
#include <numeric>

namespace domainlens {

namespace {

void append_text(std::string& out, std::string_view piece) {
    if (piece.empty()) return;
    if (!out.empty()) out += ' ';
    out += piece;
}

const std::vector<std::string>& tokens_of(const DomainSample& s, TextChannel c) {
    return c == TextChannel::Meta ? s.meta_tokens : s.content_tokens;
}

std::vector<ColumnDescriptor> link_columns() {
    return {{FeatureChannel::Link, "d_in"}, {FeatureChannel::Link, "d_out"}, {FeatureChannel::Link, "t_ratio"}};
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

}  // namespace

DomainSignals extract_signals(const DomainRecord& record) {
    DomainSignals s;
    s.domain = record.domain;
    s.label = record.label;
    for (const auto& page : record.pages) {
        auto extracted = extract_page(page.html, page.url);
        append_text(s.meta_text, extracted.meta.joined());
        append_text(s.content_text, extracted.visible_text);
        for (auto& u : extracted.out_urls) s.out_urls.push_back(std::move(u));
    }
    return s;
}

std::vector<DomainSignals> extract_signals(const std::vector<DomainRecord>& records, std::size_t workers) {
    std::vector<const DomainRecord*> ok;
    for (const auto& r : records)
        if (r.ok()) ok.push_back(&r);
    std::vector<DomainSignals> out(ok.size());
    parallel_for(ok.size(), workers, [&](std::size_t i) { out[i] = extract_signals(*ok[i]); });
    return out;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.label == Label::Disinfo ? 1 : 0);
    return out;
}

std::vector<std::string> Dataset::domains() const {
    std::vector<std::string> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.domain);
    return out;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset d;
    d.samples.reserve(rows.size());
    for (std::size_t r : rows) d.samples.push_back(samples.at(r));
    return d;
}

DomainSample make_sample(const DomainSignals& signals, const LinkGraph& graph, const LabelSet& labels,
                         const StopwordSet& stopwords) {
    DomainSample s;
    s.domain = signals.domain;
    s.label = labels.label_of(signals.domain);
    s.meta_tokens = preprocess(signals.meta_text, stopwords);
    s.content_tokens = preprocess(signals.content_text, stopwords);
    s.link = graph.index_of(signals.domain) ? link_features(graph, labels, signals.domain) : LinkFeatures{};
    return s;
}

BuiltDataset build_dataset(std::span<const DomainSignals> signals, const LabelSet& labels, const PublicSuffixList& psl,
                           const StopwordSet& stopwords, std::size_t workers) {
    std::vector<LinkSource> sources;
    sources.reserve(signals.size());
    for (const auto& s : signals) sources.push_back({s.domain, s.out_urls});
    BuiltDataset out;
    out.graph = build_graph(sources, psl, labels);

    std::vector<const DomainSignals*> labeled;
    for (const auto& s : signals)
        if (is_labeled(labels.label_of(s.domain))) labeled.push_back(&s);
    std::sort(labeled.begin(), labeled.end(), [](auto* a, auto* b) { return a->domain < b->domain; });
    out.dataset.samples.resize(labeled.size());
    parallel_for(labeled.size(), workers, [&](std::size_t i) {
        out.dataset.samples[i] = make_sample(*labeled[i], out.graph, labels, stopwords);
    });
    return out;
}

ChannelSet ChannelSet::single(FeatureChannel c) {
    ChannelSet s;
    if (c == FeatureChannel::Meta) s.meta = true;
    else if (c == FeatureChannel::Content) s.content = true;
    else s.link = true;
    return s;
}

ChannelSet ChannelSet::parse(std::string_view text) {
    ChannelSet s;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        auto part = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (part == "amalgamated" || part == "all") s = all();
        else if (part == "meta") s.meta = true;
        else if (part == "content") s.content = true;
        else if (part == "link" || part == "hyperlinks") s.link = true;
        else throw config_error("InvalidArgument", "unknown channel '" + std::string(part) + "'");
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return s;
}

std::string ChannelSet::name() const {
    if (count() == 3) return "amalgamated";
    std::string out;
    if (meta) append_text(out, "meta");
    if (content) append_text(out, "content");
    if (link) append_text(out, "hyperlinks");
    std::replace(out.begin(), out.end(), ' ', '+');
    return out;
}

const SvmHyperparams& PipelineConfig::hyperparams_for(const ChannelSet& channels) const {
    if (channels.count() > 1) return amalgamated_hp;
    return channels.link ? link_hp : text_hp;
}

std::vector<ColumnDescriptor> FittedTextChannel::columns() const {
    const auto fc = channel == TextChannel::Meta ? FeatureChannel::Meta : FeatureChannel::Content;
    std::vector<ColumnDescriptor> cols;
    cols.reserve(selected.size());
    for (std::size_t c : selected) cols.push_back({fc, vocab.terms[c]});
    return cols;
}

std::vector<double> FittedTextChannel::transform(std::span<const std::string> tokens) const {
    auto full = vectorize(tokens, vocab, &maxima);
    std::vector<double> out;
    out.reserve(selected.size());
    for (std::size_t c : selected) out.push_back(full[c]);
    return out;
}

std::vector<std::pair<std::string, double>> FittedTextChannel::top_terms(std::size_t n, bool disinfo) const {
    FeatureSelection sel{selected, selection_coef, selection_converged};
    std::vector<std::pair<std::string, double>> out;
    for (auto [c, w] : sel.top_signed(n, disinfo)) out.emplace_back(vocab.terms[c], w);
    return out;
}

FittedTextChannel fit_text_channel(const Dataset& ds, std::span<const std::size_t> rows, TextChannel channel,
                                   const PipelineConfig& cfg) {
    std::vector<TokenizedDoc> docs;
    docs.reserve(rows.size());
    for (std::size_t r : rows) docs.push_back({ds.samples.at(r).domain, channel, tokens_of(ds.samples[r], channel)});

    FittedTextChannel fit;
    fit.channel = channel;
    fit.vocab = build_vocabulary(docs, cfg.band);
    auto batch = vectorize_fit(docs, fit.vocab);
    fit.maxima = std::move(batch.maxima);

    const auto fc = channel == TextChannel::Meta ? FeatureChannel::Meta : FeatureChannel::Content;
    std::vector<ColumnDescriptor> cols;
    for (const auto& t : fit.vocab.terms) cols.push_back({fc, t});
    std::vector<std::string> keys;
    std::vector<double> values;
    std::vector<int> labels;
    values.reserve(rows.size() * cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        keys.push_back(docs[i].domain);
        labels.push_back(ds.samples[rows[i]].label == Label::Disinfo ? 1 : 0);
        values.insert(values.end(), batch.rows[i].begin(), batch.rows[i].end());
    }
    FeatureMatrix full(std::move(keys), std::move(cols), std::move(values), std::move(labels));
    auto sel = select_top_features(full, std::min(cfg.top_k, full.n_cols()), cfg.selection);
    fit.selected = std::move(sel.columns);
    fit.selection_coef = std::move(sel.coef);
    fit.selection_converged = sel.converged;
    return fit;
}

std::vector<ColumnDescriptor> FittedPipeline::columns() const {
    std::vector<ColumnDescriptor> cols;
    if (channels.meta) {
        auto c = meta->columns();
        cols.insert(cols.end(), c.begin(), c.end());
    }
    if (channels.content) {
        auto c = content->columns();
        cols.insert(cols.end(), c.begin(), c.end());
    }
    if (channels.link) {
        auto c = link_columns();
        cols.insert(cols.end(), c.begin(), c.end());
    }
    return cols;
}

std::vector<double> FittedPipeline::transform(const DomainSample& s) const {
    std::vector<double> out;
    if (channels.meta) {
        auto v = meta->transform(s.meta_tokens);
        out.insert(out.end(), v.begin(), v.end());
    }
    if (channels.content) {
        auto v = content->transform(s.content_tokens);
        out.insert(out.end(), v.begin(), v.end());
    }
    if (channels.link) {
        auto v = normalize_link_features(s.link);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

FeatureMatrix FittedPipeline::transform(const Dataset& ds, std::span<const std::size_t> rows) const {
    std::vector<std::string> keys;
    std::vector<double> values;
    std::vector<int> labels;
    for (std::size_t r : rows) {
        const auto& s = ds.samples.at(r);
        keys.push_back(s.domain);
        labels.push_back(s.label == Label::Disinfo ? 1 : 0);
        auto v = transform(s);
        values.insert(values.end(), v.begin(), v.end());
    }
    return FeatureMatrix(std::move(keys), columns(), std::move(values), std::move(labels));
}

FeatureMatrix FittedPipeline::transform(const Dataset& ds) const { return transform(ds, all_rows(ds.size())); }

FittedPipeline FittedPipeline::restrict(const ChannelSet& subset) const {
    if ((subset.meta && !channels.meta) || (subset.content && !channels.content) || (subset.link && !channels.link))
        throw invariant_error("ChannelNotFitted", "channel set " + subset.name() + " is not part of " + channels.name());
    FittedPipeline p = *this;
    p.channels = subset;
    if (!subset.meta) p.meta.reset();
    if (!subset.content) p.content.reset();
    return p;
}

FittedPipeline fit_pipeline(const Dataset& ds, std::span<const std::size_t> rows, const ChannelSet& channels,
                            const PipelineConfig& cfg) {
    if (channels.count() == 0) throw config_error("InvalidArgument", "no feature channel enabled");
    FittedPipeline p;
    p.channels = channels;
    if (channels.meta) p.meta = fit_text_channel(ds, rows, TextChannel::Meta, cfg);
    if (channels.content) p.content = fit_text_channel(ds, rows, TextChannel::Content, cfg);
    return p;
}

FeatureMatrix link_matrix(const Dataset& ds, std::span<const std::size_t> rows) {
    FittedPipeline p;
    p.channels = ChannelSet::single(FeatureChannel::Link);
    return p.transform(ds, rows);
}

std::vector<EvalReport> repeated_split_eval(const Dataset& ds, std::span<const ChannelSet> evaluated,
                                            const PipelineConfig& cfg, const SplitConfig& split,
                                            const SplitObserver& observer) {
    if (split.n_splits == 0) throw config_error("InvalidArgument", "n_splits must be positive");
    if (evaluated.empty()) throw config_error("InvalidArgument", "nothing to evaluate");
    ChannelSet needed;
    for (const auto& e : evaluated) {
        needed.meta |= e.meta;
        needed.content |= e.content;
        needed.link |= e.link;
    }
    const auto labels = ds.labels();
    std::optional<FittedPipeline> global;
    if (cfg.global_selection) global = fit_pipeline(ds, all_rows(ds.size()), needed, cfg);

    const std::size_t n_eval = evaluated.size();
    std::vector<std::vector<Metrics>> metrics(n_eval, std::vector<Metrics>(split.n_splits));
    std::vector<std::vector<char>> converged(n_eval, std::vector<char>(split.n_splits, 1));
    parallel_for(split.n_splits, split.workers, [&](std::size_t s) {
        const auto seed = split_seed(split.seed, s);
        const auto rows = stratified_split(labels, split.train_frac, seed);
        const FittedPipeline fitted = global ? *global : fit_pipeline(ds, rows.train, needed, cfg);
        if (observer) observer(s, fitted, rows);
        for (std::size_t e = 0; e < n_eval; ++e) {
            auto p = fitted.restrict(evaluated[e]);
            auto train = p.transform(ds, rows.train);
            auto test = p.transform(ds, rows.test);
            SvmHyperparams hp = cfg.hyperparams_for(evaluated[e]);
            if (cfg.grid_search)
                hp = grid_search_cv(train, cfg.c_grid, cfg.penalties, cfg.cv_folds, split_seed(seed, e), hp.tolerance)
                         .best;
            auto model = train_svm(train, hp);
            converged[e][s] = model.converged;
            metrics[e][s] = evaluate(model, test);
        }
    });

    std::vector<EvalReport> reports;
    const auto n_disinfo = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    for (std::size_t e = 0; e < n_eval; ++e) {
        auto r = summarize(evaluated[e].name(), std::move(metrics[e]));
        r.train_frac = split.train_frac;
        r.seed = split.seed;
        r.n_rows = ds.size();
        r.n_disinfo = n_disinfo;
        r.hyperparams = cfg.hyperparams_for(evaluated[e]);
        r.nonconverged_fits = static_cast<std::size_t>(std::count(converged[e].begin(), converged[e].end(), 0));
        reports.push_back(std::move(r));
    }
    return reports;
}

EvalReport repeated_split_eval(const Dataset& ds, const ChannelSet& channels, const PipelineConfig& cfg,
                               const SplitConfig& split, const SplitObserver& observer) {
    return repeated_split_eval(ds, std::span<const ChannelSet>(&channels, 1), cfg, split, observer).front();
}

EvalReport dedup_network_retrain(const Dataset& ds, const NetworkMap& network_of, const ChannelSet& channels,
                                 const PipelineConfig& cfg, const SplitConfig& split) {
    const auto domains = ds.domains();
    const auto labels = ds.labels();
    auto keep = dedup_rows(domains, labels, network_of);
    auto report = repeated_split_eval(ds.subset(keep), channels, cfg, split);
    report.name = "dedup-" + channels.name();
    return report;
}

double DeployedModel::decision(const DomainSample& s) const { return classifier.decision(pipeline.transform(s)); }

DeployedModel train_deployed(const Dataset& ds, const ChannelSet& channels, const PipelineConfig& cfg,
                             std::uint64_t seed) {
    DeployedModel m;
    m.seed = seed;
    m.pipeline = fit_pipeline(ds, all_rows(ds.size()), channels, cfg);
    auto X = m.pipeline.transform(ds);
    SvmHyperparams hp = cfg.hyperparams_for(channels);
    if (cfg.grid_search) hp = grid_search_cv(X, cfg.c_grid, cfg.penalties, cfg.cv_folds, seed, hp.tolerance).best;
    m.classifier = train_svm(X, hp);
    return m;
}

}  // namespace domainlens
