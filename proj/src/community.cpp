#include "domainlens/community.hpp"

#include "domainlens/common.hpp"
#include "domainlens/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace domainlens {

namespace {

// Renumbers community ids by first appearance in node order.
std::vector<std::size_t> densify(const std::vector<std::size_t>& raw) {
    std::map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = ids.emplace(raw[i], ids.size());
        out[i] = it->second;
    }
    return out;
}

// Weighted graph used between Louvain levels; self-loops carry the weight
// of edges collapsed inside a community.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
    std::vector<double> self;                                      // self-loop weight
    std::vector<double> degree;                                    // self-loop counted twice
    double total = 0.0;                                            // m

    std::size_t size() const { return adj.size(); }
};

LevelGraph level_from(const UndirectedGraph& g) {
    LevelGraph lg;
    lg.adj.resize(g.node_count());
    lg.self.assign(g.node_count(), 0.0);
    lg.degree.assign(g.node_count(), 0.0);
    for (std::size_t i = 0; i < g.node_count(); ++i) lg.adj[i] = g.neighbors(i);
    for (const auto& e : g.edges()) {
        lg.degree[e.u] += e.weight;
        lg.degree[e.v] += e.weight;
        lg.total += e.weight;
    }
    return lg;
}

// One level of local moves. Returns true when any node changed community.
bool local_moves(const LevelGraph& g, std::vector<std::size_t>& comm, Rng& rng) {
    const std::size_t n = g.size();
    const double m2 = 2.0 * g.total;
    std::vector<double> tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<double> link_to(n, 0.0);
    std::vector<std::size_t> touched;
    bool any = false;
    for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t i : order) {
            const std::size_t own = comm[i];
            touched.clear();
            for (auto [j, w] : g.adj[i]) {
                if (link_to[comm[j]] == 0.0) touched.push_back(comm[j]);
                link_to[comm[j]] += w;
            }
            tot[own] -= g.degree[i];
            const double ki = g.degree[i];
            std::size_t best = own;
            double best_gain = link_to[own] - tot[own] * ki / m2;
            for (std::size_t c : touched) {
                double gain = link_to[c] - tot[c] * ki / m2;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += ki;
            if (best != own) {
                comm[i] = best;
                moved = any = true;
            }
            for (std::size_t c : touched) link_to[c] = 0.0;
            link_to[own] = 0.0;
        }
    }
    return any;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::size_t>& comm, std::size_t k) {
    LevelGraph out;
    out.adj.resize(k);
    out.self.assign(k, 0.0);
    out.degree.assign(k, 0.0);
    out.total = g.total;
    std::vector<std::map<std::size_t, double>> w(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.self[comm[i]] += g.self[i];
        out.degree[comm[i]] += g.degree[i];
        for (auto [j, wij] : g.adj[i]) {
            if (comm[i] == comm[j]) {
                if (i < j) out.self[comm[i]] += wij;
            } else {
                w[comm[i]][comm[j]] += wij;
            }
        }
    }
    for (std::size_t c = 0; c < k; ++c) out.adj[c].assign(w[c].begin(), w[c].end());
    return out;
}

Partition finish(const UndirectedGraph& g, const std::vector<std::size_t>& raw) {
    Partition p;
    p.nodes = g.nodes();
    p.community_of = densify(raw);
    p.modularity = modularity(g, p.community_of);
    return p;
}

}  // namespace

std::size_t Partition::community_count() const {
    return community_of.empty() ? 0 : *std::max_element(community_of.begin(), community_of.end()) + 1;
}

std::optional<std::size_t> Partition::community(std::string_view node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) return std::nullopt;
    return community_of[static_cast<std::size_t>(it - nodes.begin())];
}

double modularity(const UndirectedGraph& g, const std::vector<std::size_t>& community_of) {
    if (community_of.size() != g.node_count())
        throw invariant_error("ShapeMismatch", "partition does not cover the graph");
    double m = 0.0;
    for (const auto& e : g.edges()) m += e.weight;
    if (m == 0.0) return 0.0;
    std::map<std::size_t, double> inside, degree;
    for (const auto& e : g.edges()) {
        degree[community_of[e.u]] += e.weight;
        degree[community_of[e.v]] += e.weight;
        if (community_of[e.u] == community_of[e.v]) inside[community_of[e.u]] += e.weight;
    }
    double q = 0.0;
    for (const auto& [c, d] : degree) {
        double l = inside.count(c) ? inside[c] : 0.0;
        q += l / m - (d / (2.0 * m)) * (d / (2.0 * m));
    }
    return q;
}

Partition louvain(const UndirectedGraph& g, std::uint64_t seed) {
    if (g.node_count() == 0) throw data_error("EmptyGraph", "community detection needs at least one node");
    Rng rng(seed);
    std::vector<std::size_t> membership(g.node_count());
    std::iota(membership.begin(), membership.end(), 0);
    if (g.edge_count() == 0) return finish(g, membership);

    LevelGraph level = level_from(g);
    for (;;) {
        std::vector<std::size_t> comm(level.size());
        std::iota(comm.begin(), comm.end(), 0);
        if (!local_moves(level, comm, rng)) break;
        auto dense = densify(comm);
        const std::size_t k = dense.empty() ? 0 : *std::max_element(dense.begin(), dense.end()) + 1;
        for (auto& c : membership) c = dense[c];
        if (k == level.size()) break;
        level = aggregate(level, dense, k);
    }
    return finish(g, membership);
}

Partition louvain(const LinkGraph& g, std::uint64_t seed) { return louvain(to_undirected(g), seed); }

Partition label_propagation(const UndirectedGraph& g, std::uint64_t seed) {
    const std::size_t n = g.node_count();
    if (n == 0) throw data_error("EmptyGraph", "community detection needs at least one node");
    Rng rng(seed);

    // Greedy proper coloring in a seeded order; nodes of one color share no
    // edge, so each class can update simultaneously.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::size_t> color(n, 0);
    std::size_t n_colors = 0;
    {
        std::vector<char> taken;
        std::vector<char> done(n, 0);
        for (std::size_t v : order) {
            taken.assign(n_colors + 1, 0);
            for (auto [u, w] : g.neighbors(v))
                if (done[u]) taken[color[u]] = 1;
            std::size_t c = 0;
            while (taken[c]) ++c;
            color[v] = c;
            done[v] = 1;
            n_colors = std::max(n_colors, c + 1);
        }
    }
    std::vector<std::vector<std::size_t>> classes(n_colors);
    for (std::size_t v : order) classes[color[v]].push_back(v);

    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::size_t> touched, best;

    auto max_labels = [&](std::size_t v) {
        touched.clear();
        best.clear();
        std::size_t top = 0;
        for (auto [u, w] : g.neighbors(v)) {
            if (count[label[u]]++ == 0) touched.push_back(label[u]);
            top = std::max(top, count[label[u]]);
        }
        for (std::size_t l : touched)
            if (count[l] == top) best.push_back(l);
        for (std::size_t l : touched) count[l] = 0;
        std::sort(best.begin(), best.end());
    };

    const std::size_t max_rounds = 1000;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        for (const auto& cls : classes) {
            std::vector<std::pair<std::size_t, std::size_t>> updates;
            for (std::size_t v : cls) {
                max_labels(v);
                if (best.empty() || std::binary_search(best.begin(), best.end(), label[v])) continue;
                updates.emplace_back(v, best[rng.below(best.size())]);
            }
            for (auto [v, l] : updates) label[v] = l;
        }
        bool stable = true;
        for (std::size_t v = 0; v < n && stable; ++v) {
            max_labels(v);
            if (!best.empty() && !std::binary_search(best.begin(), best.end(), label[v])) stable = false;
        }
        if (stable) break;
    }
    return finish(g, label);
}

Partition label_propagation(const LinkGraph& g, std::uint64_t seed) {
    return label_propagation(to_undirected(g), seed);
}

nlohmann::json to_json(const Partition& p) {
    nlohmann::json nodes = nlohmann::json::object();
    for (std::size_t i = 0; i < p.nodes.size(); ++i) nodes[p.nodes[i]] = p.community_of[i];
    return {{"modularity", p.modularity}, {"communities", p.community_count()}, {"nodes", std::move(nodes)}};
}

}  // namespace domainlens
