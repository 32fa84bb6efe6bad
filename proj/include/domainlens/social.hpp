#pragma once

#include "domainlens/corpus.hpp"
#include "domainlens/linkgraph.hpp"
#include "domainlens/pipeline.hpp"
#include "domainlens/psl.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace domainlens {

struct Message {
    std::string channel_id;
    std::string message_id;
    std::int64_t timestamp = 0;  // UTC seconds
    std::string text;
    std::optional<std::string> forwarded_from;
    std::vector<std::string> urls;  // explicit and text-extracted, deduplicated
};

struct MessageDump {
    std::vector<Message> messages;
};

// http(s) URLs in free text; trailing sentence punctuation is not part of
// the URL.
std::vector<std::string> extract_urls(std::string_view text);

// JSONL, one message object per line; blank lines are skipped. Throws
// Data/MalformedLine (1-based line number) and Data/DuplicateMessage.
MessageDump parse_dump(std::istream& in);
MessageDump load_dump(const std::filesystem::path& path);

// Node per posting or forwarded-from channel; edge A->B iff a message in A
// was forwarded from B.
LinkGraph build_forward_graph(const MessageDump& dump);

struct SharerProfile {
    std::string actor_id;
    std::map<std::string, std::size_t> shared_domains;  // domain -> times shared
    std::size_t disinfo_count = 0;
    std::size_t unique_disinfo = 0;

    bool operator==(const SharerProfile&) const = default;
};

// Every actor, ranked by unique_disinfo desc, disinfo_count desc, actor asc;
// truncated to k (k == 0 keeps all).
std::vector<SharerProfile> top_sharers(const MessageDump& dump, const LabelSet& labels, const PublicSuffixList& psl,
                                       std::size_t k);

using ActorDomains = std::map<std::string, std::set<std::string>>;

// Registrable domains each actor shared (set semantics).
ActorDomains actor_domains(const MessageDump& dump, const PublicSuffixList& psl);

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;  // u < v
    double weight = 1.0;

    bool operator==(const WeightedEdge&) const = default;
};

// Simple undirected weighted graph; nodes sorted by name.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    // Self-loops are dropped; repeated pairs keep the first weight.
    UndirectedGraph(std::vector<std::string> nodes, std::vector<WeightedEdge> edges);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    // (neighbor, weight), ascending neighbor.
    const std::vector<std::pair<std::size_t, double>>& neighbors(std::size_t i) const { return adj_[i]; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool has_edge(std::string_view a, std::string_view b) const;

private:
    std::vector<std::string> nodes_;
    std::vector<WeightedEdge> edges_;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

// Direction dropped, parallel edges collapsed, unit weights.
UndirectedGraph to_undirected(const LinkGraph& g);

// Edge {A,B} with weight J iff J = |U_A & U_B| / |U_A | U_B| >= threshold,
// U_X being the actors who shared X. Domains without an edge are omitted.
// Throws Config/InvalidArgument unless 0 < threshold <= 1.
UndirectedGraph jaccard_share_graph(const ActorDomains& actors, double threshold = 0.03, std::size_t workers = 1);

std::string export_graph(const UndirectedGraph& g, GraphFormat format);

enum class CandidateStatus { Scored, Unscored };

struct CandidateRow {
    std::string domain;
    std::size_t share_count = 0;
    CandidateStatus status = CandidateStatus::Unscored;
    std::optional<double> margin;
    std::optional<Label> prediction;
    std::string note;  // reason for Unscored rows
};

// Shared registrable domains not in `known`, featurized from their corpus
// record (link features against the graph of known and candidate domains,
// labeled by `known`) and scored by `model`. Scored rows come first by
// margin descending; candidates without a usable record are Unscored
// (NoCorpusForCandidate), by domain.
std::vector<CandidateRow> discover_candidate_domains(const MessageDump& dump, const LabelSet& known,
                                                     const DeployedModel& model,
                                                     std::span<const DomainSignals> known_signals,
                                                     const std::vector<DomainRecord>& candidate_records,
                                                     const PublicSuffixList& psl, const StopwordSet& stopwords);

nlohmann::json to_json(const SharerProfile& p);
nlohmann::json to_json(const CandidateRow& r);

}  // namespace domainlens
