#pragma once

#include "domainlens/common.hpp"
#include "domainlens/corpus.hpp"
#include "domainlens/psl.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace domainlens {

// Directed, unweighted, self-loop-free graph over domains (or channels).
// Nodes are kept in lexicographic order; adjacency lists are sorted.
class LinkGraph {
public:
    LinkGraph() = default;

    // Builds from explicit nodes and edges. Unknown endpoints are added as
    // unlabeled nodes; duplicate edges collapse and self-loops are dropped.
    static LinkGraph from_edges(std::vector<std::pair<std::string, Label>> nodes,
                                std::span<const std::pair<std::string, std::string>> edges);

    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const std::string& name(std::size_t i) const { return names_[i]; }
    Label label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    // Throws Data/UnknownNode.
    std::size_t require(std::string_view name) const;

    const std::vector<std::size_t>& out(std::size_t i) const { return out_[i]; }
    const std::vector<std::size_t>& in(std::size_t i) const { return in_[i]; }
    bool has_edge(std::size_t from, std::size_t to) const;

    // Every edge as (from, to), ordered by from then to.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    void set_labels(const LabelSet& labels);

    bool operator==(const LinkGraph& o) const {
        return names_ == o.names_ && labels_ == o.labels_ && out_ == o.out_;
    }

private:
    std::vector<std::string> names_;
    std::vector<Label> labels_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    std::size_t edge_count_ = 0;
};

struct LinkSource {
    std::string domain;
    std::vector<std::string> out_urls;
};

// One node per source domain and per link target; edge A->B iff some page
// of A links a URL whose registrable domain is B != A. Labels come from
// `labels` (Unlabeled when absent). URLs without a host are skipped.
LinkGraph build_graph(std::span<const LinkSource> sources, const PublicSuffixList& psl, const LabelSet& labels);

inline constexpr double kLinkSentinel = -0.5;
inline constexpr double kLinkFeatureScale = 10.5;

struct LinkFeatures {
    double d_in = kLinkSentinel;
    double d_out = kLinkSentinel;
    double t_ratio = kLinkSentinel;

    std::array<double, 3> as_array() const { return {d_in, d_out, t_ratio}; }
    bool operator==(const LinkFeatures&) const = default;
};

// d_in  = unique disinfo in-neighbors / unique labeled in-neighbors
// d_out = unique disinfo out-neighbors / unique out-neighbors (any label)
// t     = unique labeled in-neighbors / unique out-neighbors
// A zero denominator gives -0.5 for that component. Neighbor labels are
// taken from `labels`. Throws Data/UnknownNode.
LinkFeatures link_features(const LinkGraph& g, const LabelSet& labels, std::string_view node);
LinkFeatures link_features(const LinkGraph& g, const LabelSet& labels, std::size_t node);

// (x + 0.5) / 10.5 per component, clamped to [0, 1].
std::array<double, 3> normalize_link_features(const LinkFeatures& f);

enum class Direction { In, Out };

using LabelFilter = std::function<bool(Label)>;
LabelFilter any_label();
LabelFilter only(Label l);
LabelFilter labeled_only();

struct RankedNode {
    std::string domain;
    std::size_t degree = 0;
    bool operator==(const RankedNode&) const = default;
};

// Nodes passing `filter`, by degree descending then name ascending; the
// degree counts all neighbors. Throws Config/InvalidArgument when k == 0.
std::vector<RankedNode> degree_ranking(const LinkGraph& g, Direction dir, const LabelFilter& filter, std::size_t k);

// {target} plus its in-neighbors passing `filter`, with every edge of `g`
// among them. Throws Data/UnknownNode.
LinkGraph induced_in_subgraph(const LinkGraph& g, std::string_view target, const LabelFilter& filter);

// Subgraph of `g` induced by `nodes`.
LinkGraph induced_subgraph(const LinkGraph& g, std::span<const std::size_t> nodes);

// Maximal cliques of size >= min_size in the mutual-edge graph (a~b iff
// a->b and b->a), largest first, ties by member names. Members are sorted
// names. Throws Config/InvalidArgument when min_size < 3.
std::vector<std::vector<std::string>> find_dense_clusters(const LinkGraph& g, std::size_t min_size);

enum class AdjacencyOrdering { ByLabelThenRank };

struct AdjacencyMatrix {
    std::vector<std::string> keys;  // row i and column i both refer to keys[i]
    std::vector<Label> labels;
    std::size_t info_count = 0;
    std::vector<std::uint8_t> cells;  // row-major, cells[i*n + j] = edge(keys[j] -> keys[i])

    std::size_t size() const { return keys.size(); }
    std::uint8_t at(std::size_t row, std::size_t col) const { return cells[row * keys.size() + col]; }
};

// Labeled nodes only: info by popularity rank (most popular first), then
// disinfo by name. Throws Data/MissingRank for an info node without rank.
AdjacencyMatrix export_adjacency(const LinkGraph& g, const LabelSet& labels,
                                 AdjacencyOrdering ordering = AdjacencyOrdering::ByLabelThenRank);

// Plain 0/1 CSV, one row per line, no header.
std::string adjacency_csv(const AdjacencyMatrix& m);
// index,domain,label
std::string adjacency_keys_csv(const AdjacencyMatrix& m);
// "DLADJ001", uint64 little-endian n, then n*n bytes row-major.
std::string adjacency_binary(const AdjacencyMatrix& m);

enum class GraphFormat { Dot, GraphML, EdgeCsv };

std::string export_graph(const LinkGraph& g, GraphFormat format);

// Inverse of the EdgeCsv export (`from,to` header, optional `#node` lines
// carrying isolated nodes and labels).
LinkGraph parse_edge_csv(std::string_view csv);

}  // namespace domainlens
