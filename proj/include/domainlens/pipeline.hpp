#pragma once

#include "domainlens/corpus.hpp"
#include "domainlens/feature_matrix.hpp"
#include "domainlens/linkgraph.hpp"
#include "domainlens/logistic.hpp"
#include "domainlens/model.hpp"
#include "domainlens/psl.hpp"
#include "domainlens/text.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace domainlens {

// Raw per-domain signals pooled over every page of a record.
struct DomainSignals {
    std::string domain;
    Label label = Label::Unlabeled;
    std::string meta_text;     // present meta-tag values, page order
    std::string content_text;  // visible text, page order
    std::vector<std::string> out_urls;
};

DomainSignals extract_signals(const DomainRecord& record);
// Ok records only, input order kept.
std::vector<DomainSignals> extract_signals(const std::vector<DomainRecord>& records, std::size_t workers = 1);

struct DomainSample {
    std::string domain;
    Label label = Label::Info;
    std::vector<std::string> meta_tokens;
    std::vector<std::string> content_tokens;
    LinkFeatures link;

    bool operator==(const DomainSample&) const = default;
};

struct Dataset {
    std::vector<DomainSample> samples;

    std::size_t size() const { return samples.size(); }
    std::vector<int> labels() const;
    std::vector<std::string> domains() const;
    Dataset subset(std::span<const std::size_t> rows) const;
};

struct BuiltDataset {
    Dataset dataset;  // labeled domains only, sorted by domain
    LinkGraph graph;  // every source and link target
};

BuiltDataset build_dataset(std::span<const DomainSignals> signals, const LabelSet& labels, const PublicSuffixList& psl,
                           const StopwordSet& stopwords, std::size_t workers = 1);

// Tokens and link features for one domain against a labeled graph.
DomainSample make_sample(const DomainSignals& signals, const LinkGraph& graph, const LabelSet& labels,
                         const StopwordSet& stopwords);

struct ChannelSet {
    bool meta = false;
    bool content = false;
    bool link = false;

    static ChannelSet all() { return {true, true, true}; }
    static ChannelSet single(FeatureChannel c);
    // "meta", "content", "hyperlinks"/"link", "amalgamated"/"all", or a
    // comma-separated list of single channels.
    static ChannelSet parse(std::string_view s);

    std::size_t count() const { return meta + content + link; }
    // meta | content | hyperlinks | amalgamated | a+b list
    std::string name() const;

    bool operator==(const ChannelSet&) const = default;
};

struct PipelineConfig {
    DfBand band;
    std::size_t top_k = 500;
    LogisticOptions selection;
    SvmHyperparams text_hp{29.76};
    SvmHyperparams link_hp{10000.0};
    SvmHyperparams amalgamated_hp{29.76};
    // Fit vocabulary, scaling and selection once on all rows instead of per split.
    bool global_selection = false;
    bool grid_search = false;
    std::size_t cv_folds = 5;
    std::vector<double> c_grid = default_c_grid();
    std::vector<Penalty> penalties{Penalty::L2};

    const SvmHyperparams& hyperparams_for(const ChannelSet& channels) const;
};

struct FittedTextChannel {
    TextChannel channel = TextChannel::Meta;
    Vocabulary vocab;
    ColumnMaxima maxima;
    std::vector<std::size_t> selected;  // vocabulary columns kept, ascending
    std::vector<double> selection_coef;
    bool selection_converged = true;

    std::vector<ColumnDescriptor> columns() const;
    // Scaled, selected feature values for one token list.
    std::vector<double> transform(std::span<const std::string> tokens) const;
    // Top positive (disinfo) or negative (info) selection terms.
    std::vector<std::pair<std::string, double>> top_terms(std::size_t n, bool disinfo) const;

    bool operator==(const FittedTextChannel&) const = default;
};

FittedTextChannel fit_text_channel(const Dataset& ds, std::span<const std::size_t> rows, TextChannel channel,
                                   const PipelineConfig& cfg);

struct FittedPipeline {
    ChannelSet channels;
    std::optional<FittedTextChannel> meta;
    std::optional<FittedTextChannel> content;

    std::vector<ColumnDescriptor> columns() const;
    std::vector<double> transform(const DomainSample& s) const;
    FeatureMatrix transform(const Dataset& ds, std::span<const std::size_t> rows) const;
    FeatureMatrix transform(const Dataset& ds) const;
    FittedPipeline restrict(const ChannelSet& subset) const;

    bool operator==(const FittedPipeline&) const = default;
};

// Fits every enabled text channel on `rows` only.
FittedPipeline fit_pipeline(const Dataset& ds, std::span<const std::size_t> rows, const ChannelSet& channels,
                            const PipelineConfig& cfg);

FeatureMatrix link_matrix(const Dataset& ds, std::span<const std::size_t> rows);

// Called once per split with that split's fitted pipeline; must be
// thread-safe when splits run on several workers.
using SplitObserver =
    std::function<void(std::size_t split, const FittedPipeline& fitted, const Split& rows)>;

// One report per entry of `evaluated` (e.g. meta, content, link, all),
// sharing splits and per-split fits.
std::vector<EvalReport> repeated_split_eval(const Dataset& ds, std::span<const ChannelSet> evaluated,
                                            const PipelineConfig& cfg, const SplitConfig& split,
                                            const SplitObserver& observer = {});

EvalReport repeated_split_eval(const Dataset& ds, const ChannelSet& channels, const PipelineConfig& cfg,
                               const SplitConfig& split, const SplitObserver& observer = {});

// Keeps one domain per disinfo network, then evaluates as above.
EvalReport dedup_network_retrain(const Dataset& ds, const NetworkMap& network_of, const ChannelSet& channels,
                                 const PipelineConfig& cfg, const SplitConfig& split);

// Pipeline and classifier fitted on every row, ready for new domains.
struct DeployedModel {
    FittedPipeline pipeline;
    TrainedModel classifier;
    std::uint64_t seed = 0;

    double decision(const DomainSample& s) const;
    Label predict(const DomainSample& s) const { return decision(s) > 0.0 ? Label::Disinfo : Label::Info; }
};

DeployedModel train_deployed(const Dataset& ds, const ChannelSet& channels, const PipelineConfig& cfg,
                             std::uint64_t seed);

}  // namespace domainlens
