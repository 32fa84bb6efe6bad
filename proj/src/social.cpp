#include "domainlens/social.hpp"

#include "domainlens/error.hpp"
#include "domainlens/url.hpp"
#include "escape.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace domainlens {

using nlohmann::json;

namespace {

bool url_char(unsigned char c) {
    if (c <= 0x20 || c == 0x7f) return false;
    switch (c) {
        case '<': case '>': case '"': case '\'': case '`': case '{': case '}': case '|': case '\\': case '^':
            return false;
        default: return true;
    }
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

std::string id_field(const json& obj, const char* key, std::size_t line) {
    const auto& v = obj.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw data_error("MalformedLine", "line " + std::to_string(line) + ": " + key + " must be a string");
}

std::optional<std::string> domain_of(const std::string& url, const PublicSuffixList& psl) {
    try {
        return registrable_domain(url, psl);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<std::string> extract_urls(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        auto rest = text.substr(i);
        std::size_t scheme_len = starts_with_ci(rest, "https://") ? 8 : starts_with_ci(rest, "http://") ? 7 : 0;
        bool boundary = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        if (scheme_len == 0 || !boundary) {
            ++i;
            continue;
        }
        std::size_t end = i + scheme_len;
        while (end < text.size() && url_char(static_cast<unsigned char>(text[end]))) ++end;
        std::string_view cand = text.substr(i, end - i);
        // Trailing punctuation belongs to the sentence, as does a closing
        // parenthesis without a matching opening one.
        for (;;) {
            if (cand.size() <= scheme_len) break;
            char c = cand.back();
            if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?') {
                cand.remove_suffix(1);
                continue;
            }
            if (c == ')' || c == ']') {
                char open = c == ')' ? '(' : '[';
                if (std::count(cand.begin(), cand.end(), open) < std::count(cand.begin(), cand.end(), c)) {
                    cand.remove_suffix(1);
                    continue;
                }
            }
            break;
        }
        if (auto u = Url::parse(cand); u && !u->host().empty()) out.emplace_back(cand);
        i = end;
    }
    return out;
}

MessageDump parse_dump(std::istream& in) {
    static const std::set<std::string> allowed = {"channel_id", "message_id", "timestamp", "text", "forwarded_from", "urls"};
    MessageDump dump;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        Message m;
        try {
            auto obj = json::parse(line);
            if (!obj.is_object()) throw data_error("MalformedLine", "line " + std::to_string(lineno) + ": not an object");
            for (const auto& [key, value] : obj.items())
                if (!allowed.count(key))
                    throw data_error("MalformedLine", "line " + std::to_string(lineno) + ": unexpected field " + key);
            m.channel_id = id_field(obj, "channel_id", lineno);
            m.message_id = id_field(obj, "message_id", lineno);
            m.timestamp = obj.at("timestamp").get<std::int64_t>();
            m.text = obj.at("text").get<std::string>();
            if (obj.contains("forwarded_from") && !obj["forwarded_from"].is_null())
                m.forwarded_from = id_field(obj, "forwarded_from", lineno);
            std::vector<std::string> urls;
            if (obj.contains("urls") && !obj["urls"].is_null()) urls = obj["urls"].get<std::vector<std::string>>();
            for (auto& u : extract_urls(m.text)) urls.push_back(std::move(u));
            std::set<std::string> have;
            for (auto& u : urls)
                if (have.insert(u).second) m.urls.push_back(std::move(u));
        } catch (const json::exception& e) {
            throw data_error("MalformedLine", "line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!seen.emplace(m.channel_id, m.message_id).second)
            throw data_error("DuplicateMessage", "channel " + m.channel_id + " message " + m.message_id + " (line " +
                                                     std::to_string(lineno) + ")");
        dump.messages.push_back(std::move(m));
    }
    return dump;
}

MessageDump load_dump(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("MissingInput", "cannot open message dump " + path.string());
    return parse_dump(in);
}

LinkGraph build_forward_graph(const MessageDump& dump) {
    std::set<std::string> channels;
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& m : dump.messages) {
        channels.insert(m.channel_id);
        if (m.forwarded_from) {
            channels.insert(*m.forwarded_from);
            edges.emplace_back(m.channel_id, *m.forwarded_from);
        }
    }
    std::vector<std::pair<std::string, Label>> nodes;
    for (const auto& c : channels) nodes.emplace_back(c, Label::Unlabeled);
    return LinkGraph::from_edges(std::move(nodes), edges);
}

std::vector<SharerProfile> top_sharers(const MessageDump& dump, const LabelSet& labels, const PublicSuffixList& psl,
                                       std::size_t k) {
    std::map<std::string, SharerProfile> by_actor;
    for (const auto& m : dump.messages) {
        auto& p = by_actor[m.channel_id];
        p.actor_id = m.channel_id;
        for (const auto& u : m.urls)
            if (auto d = domain_of(u, psl)) ++p.shared_domains[*d];
    }
    std::vector<SharerProfile> out;
    for (auto& [actor, p] : by_actor) {
        for (const auto& [d, n] : p.shared_domains)
            if (labels.label_of(d) == Label::Disinfo) {
                p.disinfo_count += n;
                ++p.unique_disinfo;
            }
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const SharerProfile& a, const SharerProfile& b) {
        if (a.unique_disinfo != b.unique_disinfo) return a.unique_disinfo > b.unique_disinfo;
        if (a.disinfo_count != b.disinfo_count) return a.disinfo_count > b.disinfo_count;
        return a.actor_id < b.actor_id;
    });
    if (k > 0 && out.size() > k) out.resize(k);
    return out;
}

ActorDomains actor_domains(const MessageDump& dump, const PublicSuffixList& psl) {
    ActorDomains out;
    for (const auto& m : dump.messages) {
        auto& set = out[m.channel_id];
        for (const auto& u : m.urls)
            if (auto d = domain_of(u, psl)) set.insert(*d);
    }
    return out;
}

UndirectedGraph::UndirectedGraph(std::vector<std::string> nodes, std::vector<WeightedEdge> edges)
    : nodes_(std::move(nodes)) {
    if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
        std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
        throw invariant_error("UnsortedNodes", "undirected graph nodes must be sorted and unique");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto e : edges) {
        if (e.u >= nodes_.size() || e.v >= nodes_.size()) throw invariant_error("UnknownNode", "edge endpoint out of range");
        if (e.u == e.v) continue;
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!seen.emplace(e.u, e.v).second) continue;
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    adj_.resize(nodes_.size());
    for (const auto& e : edges_) {
        adj_[e.u].emplace_back(e.v, e.weight);
        adj_[e.v].emplace_back(e.u, e.weight);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

std::optional<std::size_t> UndirectedGraph::index_of(std::string_view name) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

bool UndirectedGraph::has_edge(std::string_view a, std::string_view b) const {
    auto ia = index_of(a), ib = index_of(b);
    if (!ia || !ib) return false;
    const auto& n = adj_[*ia];
    auto it = std::lower_bound(n.begin(), n.end(), std::pair<std::size_t, double>(*ib, -1e300));
    return it != n.end() && it->first == *ib;
}

UndirectedGraph to_undirected(const LinkGraph& g) {
    std::vector<WeightedEdge> edges;
    for (auto [a, b] : g.edges()) edges.push_back({std::min(a, b), std::max(a, b), 1.0});
    return UndirectedGraph(g.names(), std::move(edges));
}

UndirectedGraph jaccard_share_graph(const ActorDomains& actors, double threshold, std::size_t workers) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw config_error("InvalidArgument", "Jaccard threshold must lie in (0, 1]");
    std::set<std::string> all;
    for (const auto& [a, ds] : actors) all.insert(ds.begin(), ds.end());
    const std::vector<std::string> domains(all.begin(), all.end());
    auto index = [&](const std::string& d) {
        return static_cast<std::size_t>(std::lower_bound(domains.begin(), domains.end(), d) - domains.begin());
    };
    std::vector<std::vector<std::size_t>> actor_list;  // per actor, domain indices
    std::vector<std::vector<std::size_t>> sharers(domains.size());
    for (const auto& [a, ds] : actors) {
        std::vector<std::size_t> idx;
        for (const auto& d : ds) idx.push_back(index(d));
        for (std::size_t d : idx) sharers[d].push_back(actor_list.size());
        actor_list.push_back(std::move(idx));
    }

    std::vector<std::vector<WeightedEdge>> per_domain(domains.size());
    parallel_for(domains.size(), workers, [&](std::size_t A) {
        std::vector<std::size_t> inter(domains.size(), 0);
        std::vector<std::size_t> touched;
        for (std::size_t actor : sharers[A])
            for (std::size_t B : actor_list[actor])
                if (B > A && inter[B]++ == 0) touched.push_back(B);
        std::sort(touched.begin(), touched.end());
        for (std::size_t B : touched) {
            double j = static_cast<double>(inter[B]) /
                       static_cast<double>(sharers[A].size() + sharers[B].size() - inter[B]);
            if (j >= threshold) per_domain[A].push_back({A, B, j});
        }
    });

    std::vector<char> used(domains.size(), 0);
    for (const auto& es : per_domain)
        for (const auto& e : es) used[e.u] = used[e.v] = 1;
    std::vector<std::size_t> remap(domains.size());
    std::vector<std::string> nodes;
    for (std::size_t d = 0; d < domains.size(); ++d)
        if (used[d]) {
            remap[d] = nodes.size();
            nodes.push_back(domains[d]);
        }
    std::vector<WeightedEdge> edges;
    for (const auto& es : per_domain)
        for (const auto& e : es) edges.push_back({remap[e.u], remap[e.v], e.weight});
    return UndirectedGraph(std::move(nodes), std::move(edges));
}

std::string export_graph(const UndirectedGraph& g, GraphFormat format) {
    using detail::dot_escape;
    using detail::xml_escape;
    std::ostringstream out;
    const auto& n = g.nodes();
    switch (format) {
        case GraphFormat::Dot:
            out << "graph shares {\n";
            for (const auto& name : n) out << "  \"" << dot_escape(name) << "\";\n";
            for (const auto& e : g.edges())
                out << "  \"" << dot_escape(n[e.u]) << "\" -- \"" << dot_escape(n[e.v]) << "\" [weight="
                    << e.weight << "];\n";
            out << "}\n";
            break;
        case GraphFormat::GraphML: {
            out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
                << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
                << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
            for (const auto& name : n) out << "    <node id=\"" << xml_escape(name) << "\"/>\n";
            std::size_t id = 0;
            for (const auto& e : g.edges())
                out << "    <edge id=\"e" << id++ << "\" source=\"" << xml_escape(n[e.u]) << "\" target=\""
                    << xml_escape(n[e.v]) << "\"><data key=\"weight\">" << e.weight << "</data></edge>\n";
            out << "  </graph>\n</graphml>\n";
            break;
        }
        case GraphFormat::EdgeCsv:
            out << "a,b,weight\n";
            for (const auto& e : g.edges()) out << n[e.u] << ',' << n[e.v] << ',' << e.weight << '\n';
            break;
    }
    return out.str();
}

std::vector<CandidateRow> discover_candidate_domains(const MessageDump& dump, const LabelSet& known,
                                                     const DeployedModel& model,
                                                     std::span<const DomainSignals> known_signals,
                                                     const std::vector<DomainRecord>& candidate_records,
                                                     const PublicSuffixList& psl, const StopwordSet& stopwords) {
    std::map<std::string, std::size_t> shares;
    for (const auto& m : dump.messages)
        for (const auto& u : m.urls)
            if (auto d = domain_of(u, psl); d && !known.contains(*d)) ++shares[*d];

    std::map<std::string, const DomainRecord*> records;
    for (const auto& r : candidate_records) records[r.domain] = &r;

    std::vector<CandidateRow> rows;
    std::vector<DomainSignals> signals(known_signals.begin(), known_signals.end());
    std::vector<std::size_t> scored_rows;
    for (const auto& [domain, count] : shares) {
        CandidateRow row;
        row.domain = domain;
        row.share_count = count;
        auto it = records.find(domain);
        if (it == records.end()) {
            row.note = "NoCorpusForCandidate";
        } else if (!it->second->ok()) {
            row.note = "NoCorpusForCandidate: " + std::string(to_string(it->second->reason));
        } else {
            signals.push_back(extract_signals(*it->second));
            scored_rows.push_back(rows.size());
        }
        rows.push_back(std::move(row));
    }

    if (!scored_rows.empty()) {
        std::vector<LinkSource> sources;
        for (const auto& s : signals) sources.push_back({s.domain, s.out_urls});
        auto graph = build_graph(sources, psl, known);
        for (std::size_t k = 0; k < scored_rows.size(); ++k) {
            auto& row = rows[scored_rows[k]];
            const auto& sig = signals[known_signals.size() + k];
            auto sample = make_sample(sig, graph, known, stopwords);
            row.status = CandidateStatus::Scored;
            row.margin = model.decision(sample);
            row.prediction = *row.margin > 0.0 ? Label::Disinfo : Label::Info;
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const CandidateRow& a, const CandidateRow& b) {
        if (a.status != b.status) return a.status == CandidateStatus::Scored;
        if (a.margin && b.margin && *a.margin != *b.margin) return *a.margin > *b.margin;
        return a.domain < b.domain;
    });
    return rows;
}

json to_json(const SharerProfile& p) {
    json shared = json::object();
    for (const auto& [d, n] : p.shared_domains) shared[d] = n;
    return {{"actor_id", p.actor_id},
            {"unique_disinfo", p.unique_disinfo},
            {"disinfo_count", p.disinfo_count},
            {"shared_domains", std::move(shared)}};
}

json to_json(const CandidateRow& r) {
    json j{{"domain", r.domain},
           {"share_count", r.share_count},
           {"status", r.status == CandidateStatus::Scored ? "scored" : "unscored"}};
    j["margin"] = r.margin ? json(*r.margin) : json(nullptr);
    j["prediction"] = r.prediction ? json(to_string(*r.prediction)) : json(nullptr);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace domainlens
