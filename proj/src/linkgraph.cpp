#include "domainlens/linkgraph.hpp"

#include "domainlens/error.hpp"
#include "escape.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

namespace domainlens {

namespace {

using detail::dot_escape;
using detail::xml_escape;

Label parse_label(std::string_view s) {
    if (s == "info") return Label::Info;
    if (s == "disinfo") return Label::Disinfo;
    return Label::Unlabeled;
}

using NodeSet = std::vector<std::size_t>;  // sorted

NodeSet intersect(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Bron-Kerbosch with Tomita pivoting over an undirected adjacency.
void bron_kerbosch(const std::vector<NodeSet>& adj, NodeSet& r, NodeSet p, NodeSet x, std::size_t min_size,
                   std::vector<NodeSet>& out) {
    if (p.empty() && x.empty()) {
        if (r.size() >= min_size) {
            NodeSet clique = r;
            std::sort(clique.begin(), clique.end());
            out.push_back(std::move(clique));
        }
        return;
    }
    if (r.size() + p.size() < min_size) return;
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool have_pivot = false;
    for (const NodeSet* set : {&p, &x}) {
        for (std::size_t u : *set) {
            std::size_t c = intersect(adj[u], p).size();
            if (!have_pivot || c > best) {
                pivot = u;
                best = c;
                have_pivot = true;
            }
        }
    }
    NodeSet candidates;
    std::set_difference(p.begin(), p.end(), adj[pivot].begin(), adj[pivot].end(), std::back_inserter(candidates));
    for (std::size_t v : candidates) {
        r.push_back(v);
        bron_kerbosch(adj, r, intersect(p, adj[v]), intersect(x, adj[v]), min_size, out);
        r.pop_back();
        p.erase(std::lower_bound(p.begin(), p.end(), v));
        x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
}

}  // namespace

LinkGraph LinkGraph::from_edges(std::vector<std::pair<std::string, Label>> nodes,
                                std::span<const std::pair<std::string, std::string>> edges) {
    std::map<std::string, Label> all;
    for (auto& [name, label] : nodes) {
        auto [it, inserted] = all.emplace(name, label);
        if (!inserted && !is_labeled(it->second)) it->second = label;
    }
    for (const auto& [a, b] : edges) {
        all.emplace(a, Label::Unlabeled);
        all.emplace(b, Label::Unlabeled);
    }
    LinkGraph g;
    for (auto& [name, label] : all) {
        g.index_.emplace(name, g.names_.size());
        g.names_.push_back(name);
        g.labels_.push_back(label);
    }
    g.out_.resize(g.names_.size());
    g.in_.resize(g.names_.size());
    for (const auto& [a, b] : edges) {
        std::size_t from = g.index_.at(a), to = g.index_.at(b);
        if (from != to) g.out_[from].push_back(to);
    }
    for (std::size_t i = 0; i < g.out_.size(); ++i) {
        auto& o = g.out_[i];
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
        g.edge_count_ += o.size();
        for (std::size_t t : o) g.in_[t].push_back(i);
    }
    return g;
}

std::optional<std::size_t> LinkGraph::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t LinkGraph::require(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw data_error("UnknownNode", std::string(name));
    return *idx;
}

bool LinkGraph::has_edge(std::size_t from, std::size_t to) const {
    return std::binary_search(out_[from].begin(), out_[from].end(), to);
}

std::vector<std::pair<std::size_t, std::size_t>> LinkGraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    e.reserve(edge_count_);
    for (std::size_t i = 0; i < out_.size(); ++i)
        for (std::size_t t : out_[i]) e.emplace_back(i, t);
    return e;
}

void LinkGraph::set_labels(const LabelSet& labels) {
    for (std::size_t i = 0; i < names_.size(); ++i) labels_[i] = labels.label_of(names_[i]);
}

LinkGraph build_graph(std::span<const LinkSource> sources, const PublicSuffixList& psl, const LabelSet& labels) {
    std::vector<std::pair<std::string, Label>> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& src : sources) {
        nodes.emplace_back(src.domain, labels.label_of(src.domain));
        for (const auto& url : src.out_urls) {
            std::string target;
            try {
                target = registrable_domain(url, psl);
            } catch (const Error&) {
                continue;
            }
            if (target == src.domain) continue;
            nodes.emplace_back(target, labels.label_of(target));
            edges.emplace_back(src.domain, std::move(target));
        }
    }
    return LinkGraph::from_edges(std::move(nodes), edges);
}

LinkFeatures link_features(const LinkGraph& g, const LabelSet& labels, std::size_t node) {
    std::size_t in_labeled = 0, in_disinfo = 0, out_disinfo = 0;
    for (std::size_t s : g.in(node)) {
        Label l = labels.label_of(g.name(s));
        if (!is_labeled(l)) continue;
        ++in_labeled;
        in_disinfo += l == Label::Disinfo;
    }
    for (std::size_t t : g.out(node)) out_disinfo += labels.label_of(g.name(t)) == Label::Disinfo;
    const std::size_t out_total = g.out(node).size();

    LinkFeatures f;
    if (in_labeled > 0) f.d_in = static_cast<double>(in_disinfo) / static_cast<double>(in_labeled);
    if (out_total > 0) {
        f.d_out = static_cast<double>(out_disinfo) / static_cast<double>(out_total);
        f.t_ratio = static_cast<double>(in_labeled) / static_cast<double>(out_total);
    }
    return f;
}

LinkFeatures link_features(const LinkGraph& g, const LabelSet& labels, std::string_view node) {
    return link_features(g, labels, g.require(node));
}

std::array<double, 3> normalize_link_features(const LinkFeatures& f) {
    std::array<double, 3> out = f.as_array();
    for (auto& v : out) v = std::clamp((v - kLinkSentinel) / kLinkFeatureScale, 0.0, 1.0);
    return out;
}

LabelFilter any_label() {
    return [](Label) { return true; };
}
LabelFilter only(Label l) {
    return [l](Label x) { return x == l; };
}
LabelFilter labeled_only() {
    return [](Label x) { return is_labeled(x); };
}

std::vector<RankedNode> degree_ranking(const LinkGraph& g, Direction dir, const LabelFilter& filter, std::size_t k) {
    if (k == 0) throw config_error("InvalidArgument", "k must be >= 1");
    std::vector<RankedNode> ranked;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!filter(g.label(i))) continue;
        ranked.push_back({g.name(i), dir == Direction::In ? g.in(i).size() : g.out(i).size()});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedNode& a, const RankedNode& b) {
        if (a.degree != b.degree) return a.degree > b.degree;
        return a.domain < b.domain;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

LinkGraph induced_subgraph(const LinkGraph& g, std::span<const std::size_t> nodes) {
    std::vector<std::size_t> members(nodes.begin(), nodes.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<std::pair<std::string, Label>> named;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t a : members) {
        named.emplace_back(g.name(a), g.label(a));
        for (std::size_t b : g.out(a))
            if (std::binary_search(members.begin(), members.end(), b)) edges.emplace_back(g.name(a), g.name(b));
    }
    return LinkGraph::from_edges(std::move(named), edges);
}

LinkGraph induced_in_subgraph(const LinkGraph& g, std::string_view target, const LabelFilter& filter) {
    const std::size_t t = g.require(target);
    std::vector<std::size_t> members{t};
    for (std::size_t s : g.in(t))
        if (filter(g.label(s))) members.push_back(s);
    return induced_subgraph(g, members);
}

std::vector<std::vector<std::string>> find_dense_clusters(const LinkGraph& g, std::size_t min_size) {
    if (min_size < 3) throw config_error("InvalidArgument", "min_size must be >= 3");
    const std::size_t n = g.node_count();
    std::vector<NodeSet> mutual(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b : g.out(a))
            if (g.has_edge(b, a)) mutual[a].push_back(b);  // out lists are sorted, so mutual[a] is too

    // k-core pruning: a node of a clique with min_size members has at least
    // min_size-1 mutual neighbors inside the surviving graph.
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> degree(n);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = mutual[i].size();
        if (degree[i] + 1 < min_size) {
            alive[i] = false;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        std::size_t v = queue.back();
        queue.pop_back();
        for (std::size_t u : mutual[v]) {
            if (!alive[u]) continue;
            if (--degree[u] + 1 < min_size) {
                alive[u] = false;
                queue.push_back(u);
            }
        }
    }
    std::vector<NodeSet> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        for (std::size_t u : mutual[i])
            if (alive[u]) adj[i].push_back(u);
    }

    // Enumerate per connected component of the pruned mutual graph.
    std::vector<NodeSet> cliques;
    std::vector<bool> seen(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (!alive[s] || seen[s]) continue;
        NodeSet component;
        std::vector<std::size_t> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            component.push_back(v);
            for (std::size_t u : adj[v])
                if (!seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
        }
        std::sort(component.begin(), component.end());
        NodeSet r;
        bron_kerbosch(adj, r, component, {}, min_size, cliques);
    }

    std::vector<std::vector<std::string>> out;
    for (const auto& c : cliques) {
        std::vector<std::string> names;
        for (std::size_t v : c) names.push_back(g.name(v));
        std::sort(names.begin(), names.end());
        out.push_back(std::move(names));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    return out;
}

AdjacencyMatrix export_adjacency(const LinkGraph& g, const LabelSet& labels, AdjacencyOrdering) {
    struct Key {
        std::size_t node;
        long rank;
    };
    std::vector<Key> info, disinfo;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto* e = labels.find(g.name(i));
        if (!e || !is_labeled(e->label)) continue;
        if (e->label == Label::Info) {
            if (!e->popularity_rank) throw data_error("MissingRank", g.name(i));
            info.push_back({i, *e->popularity_rank});
        } else {
            disinfo.push_back({i, 0});
        }
    }
    std::stable_sort(info.begin(), info.end(), [](const Key& a, const Key& b) { return a.rank < b.rank; });

    AdjacencyMatrix m;
    std::vector<std::size_t> order;
    for (const auto& k : info) order.push_back(k.node);
    for (const auto& k : disinfo) order.push_back(k.node);
    m.info_count = info.size();
    const std::size_t n = order.size();
    std::vector<std::size_t> position(g.node_count(), n);
    for (std::size_t p = 0; p < n; ++p) {
        position[order[p]] = p;
        m.keys.push_back(g.name(order[p]));
        m.labels.push_back(p < info.size() ? Label::Info : Label::Disinfo);
    }
    m.cells.assign(n * n, 0);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t t : g.out(order[col]))
            if (position[t] < n) m.cells[position[t] * n + col] = 1;
    return m;
}

std::string adjacency_csv(const AdjacencyMatrix& m) {
    std::string out;
    const std::size_t n = m.size();
    out.reserve(n * n * 2);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c) out.push_back(',');
            out.push_back(m.cells[r * n + c] ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

std::string adjacency_keys_csv(const AdjacencyMatrix& m) {
    std::ostringstream out;
    out << "index,domain,label\n";
    for (std::size_t i = 0; i < m.size(); ++i) out << i << ',' << m.keys[i] << ',' << to_string(m.labels[i]) << '\n';
    return out.str();
}

std::string adjacency_binary(const AdjacencyMatrix& m) {
    std::string out = "DLADJ001";
    std::uint64_t n = m.size();
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((n >> (8 * b)) & 0xFF));
    out.append(reinterpret_cast<const char*>(m.cells.data()), m.cells.size());
    return out;
}

std::string export_graph(const LinkGraph& g, GraphFormat format) {
    std::ostringstream out;
    switch (format) {
        case GraphFormat::Dot: {
            out << "digraph links {\n";
            for (std::size_t i = 0; i < g.node_count(); ++i)
                out << "  \"" << dot_escape(g.name(i)) << "\" [class=\"" << to_string(g.label(i)) << "\"];\n";
            for (auto [a, b] : g.edges())
                out << "  \"" << dot_escape(g.name(a)) << "\" -> \"" << dot_escape(g.name(b)) << "\";\n";
            out << "}\n";
            break;
        }
        case GraphFormat::GraphML: {
            out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
                << "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
                << "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
                << "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
                << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
                << "  <graph id=\"G\" edgedefault=\"directed\">\n";
            for (std::size_t i = 0; i < g.node_count(); ++i)
                out << "    <node id=\"" << xml_escape(g.name(i)) << "\"><data key=\"label\">" << to_string(g.label(i))
                    << "</data></node>\n";
            std::size_t e = 0;
            for (auto [a, b] : g.edges())
                out << "    <edge id=\"e" << e++ << "\" source=\"" << xml_escape(g.name(a)) << "\" target=\""
                    << xml_escape(g.name(b)) << "\"/>\n";
            out << "  </graph>\n</graphml>\n";
            break;
        }
        case GraphFormat::EdgeCsv: {
            out << "from,to\n";
            for (auto [a, b] : g.edges()) out << g.name(a) << ',' << g.name(b) << '\n';
            for (std::size_t i = 0; i < g.node_count(); ++i)
                out << "#node," << g.name(i) << ',' << to_string(g.label(i)) << '\n';
            break;
        }
    }
    return out.str();
}

LinkGraph parse_edge_csv(std::string_view csv) {
    std::vector<std::pair<std::string, Label>> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    std::istringstream in{std::string(csv)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "from,to") throw data_error("MalformedRow", "edge CSV header must be from,to");
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!f.empty() && f[0] == "#node") {
            if (f.size() != 3) throw data_error("MalformedRow", "line " + std::to_string(lineno));
            nodes.emplace_back(f[1], parse_label(f[2]));
        } else {
            if (f.size() != 2) throw data_error("MalformedRow", "line " + std::to_string(lineno));
            edges.emplace_back(f[0], f[1]);
        }
    }
    return LinkGraph::from_edges(std::move(nodes), edges);
}

}  // namespace domainlens
