#include "domainlens/error.hpp"
#include "domainlens/linkgraph.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace domainlens;

namespace {

LabelSet labels_of(std::initializer_list<std::tuple<const char*, Label, long>> rows) {
    LabelSet s;
    for (const auto& [d, l, rank] : rows) s.add(d, LabelEntry{l, "test", std::nullopt, rank > 0 ? std::optional<long>(rank) : std::nullopt});
    return s;
}

LinkGraph graph_of(std::vector<std::pair<std::string, std::string>> edges, const LabelSet& labels = {}) {
    auto g = LinkGraph::from_edges({}, edges);
    g.set_labels(labels);
    return g;
}

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST(BuildGraph, CollapsesLinksToRegistrableDomains) {
    std::vector<LinkSource> src = {
        {"rt.com", {"https://www.infowars.com/p1", "https://infowars.com/p2", "https://rt.com/about", "mailto:x"}},
        {"a.com", {"https://a.com/about"}},
    };
    auto g = build_graph(src, PublicSuffixList::bundled(), {});
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.has_edge(g.require("rt.com"), g.require("infowars.com")));
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(build_graph({}, PublicSuffixList::bundled(), {}).node_count(), 0u);
}

TEST(LinkFeatures, FormulaExample) {
    // in: d1,d2 (disinfo), i1,i2 (info); out: d3 (disinfo), u1,u2 (unlabeled), i3 (info)
    auto labels = labels_of({{"d1.com", Label::Disinfo, 0},
                             {"d2.com", Label::Disinfo, 0},
                             {"d3.com", Label::Disinfo, 0},
                             {"i1.com", Label::Info, 1},
                             {"i2.com", Label::Info, 2},
                             {"i3.com", Label::Info, 3}});
    auto g = graph_of({{"d1.com", "x.com"},
                       {"d2.com", "x.com"},
                       {"i1.com", "x.com"},
                       {"i2.com", "x.com"},
                       {"u9.com", "x.com"},
                       {"x.com", "d3.com"},
                       {"x.com", "u1.com"},
                       {"x.com", "u2.com"},
                       {"x.com", "i3.com"}},
                      labels);
    auto f = link_features(g, labels, "x.com");
    EXPECT_DOUBLE_EQ(f.d_in, 0.5);
    EXPECT_DOUBLE_EQ(f.d_out, 0.25);
    EXPECT_DOUBLE_EQ(f.t_ratio, 1.0);
}

TEST(LinkFeatures, Sentinels) {
    auto labels = labels_of({{"a.com", Label::Info, 1}, {"b.com", Label::Disinfo, 0}, {"c.com", Label::Info, 2}});
    auto g = LinkGraph::from_edges({{"c.com", Label::Info}}, std::vector<std::pair<std::string, std::string>>{{"a.com", "b.com"}});
    auto sink = link_features(g, labels, "b.com");
    EXPECT_DOUBLE_EQ(sink.d_out, -0.5);
    EXPECT_DOUBLE_EQ(sink.t_ratio, -0.5);
    EXPECT_DOUBLE_EQ(sink.d_in, 0.0);
    EXPECT_EQ(link_features(g, labels, "c.com"), (LinkFeatures{-0.5, -0.5, -0.5}));
    EXPECT_EQ(code_of([&] { link_features(g, labels, "nope.com"); }), "UnknownNode");
}

TEST(LinkFeatures, NormalizeExamples) {
    auto n = normalize_link_features({-0.5, -0.5, -0.5});
    EXPECT_EQ(n, (std::array<double, 3>{0.0, 0.0, 0.0}));
    EXPECT_NEAR(normalize_link_features({1.0, 0.0, 0.0})[0], 1.5 / 10.5, 1e-15);
    EXPECT_DOUBLE_EQ(normalize_link_features({0.0, 0.0, 25.0})[2], 1.0);
    EXPECT_DOUBLE_EQ(normalize_link_features({0.0, 0.0, 10.0})[2], 1.0);
}

TEST(LinkFeatures, MatchRecountOnRandomGraphs) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto r = oracle::random_graph(200, 0.05, seed);
        for (std::size_t v = 0; v < r.names.size(); ++v) {
            auto want = oracle::link_features(r, v);
            auto got = link_features(r.graph, r.label_set, r.names[v]);
            ASSERT_EQ(got, want) << "graph " << seed << " node " << r.names[v];
        }
    }
}

TEST(DegreeRanking, StarAndTruncation) {
    auto g = graph_of({{"l1.com", "hub.com"}, {"l2.com", "hub.com"}, {"l3.com", "hub.com"}, {"l4.com", "hub.com"},
                       {"l5.com", "hub.com"}, {"l1.com", "l2.com"}});
    auto top = degree_ranking(g, Direction::In, any_label(), 2);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], (RankedNode{"hub.com", 5}));
    EXPECT_EQ(top[1], (RankedNode{"l2.com", 1}));
    EXPECT_EQ(degree_ranking(g, Direction::Out, any_label(), 100).size(), 6u);
    EXPECT_EQ(code_of([&] { degree_ranking(g, Direction::In, any_label(), 0); }), "InvalidArgument");
}

TEST(DegreeRanking, MatchesRecount) {
    auto r = oracle::random_graph(150, 0.04, 99);
    for (auto dir : {Direction::In, Direction::Out}) {
        std::vector<RankedNode> want;
        for (std::size_t v = 0; v < r.names.size(); ++v) {
            if (r.labels[v] != Label::Disinfo) continue;
            std::size_t deg = 0;
            for (const auto& [a, b] : r.edges) deg += dir == Direction::In ? b == v : a == v;
            want.push_back({r.names[v], deg});
        }
        std::sort(want.begin(), want.end(), [](const RankedNode& a, const RankedNode& b) {
            return a.degree != b.degree ? a.degree > b.degree : a.domain < b.domain;
        });
        want.resize(10);
        EXPECT_EQ(degree_ranking(r.graph, dir, only(Label::Disinfo), 10), want);
    }
}

TEST(InducedSubgraph, SpokesAndInterlinks) {
    auto labels = labels_of({{"a.com", Label::Disinfo, 0}, {"b.com", Label::Disinfo, 0}, {"c.com", Label::Disinfo, 0},
                             {"i.com", Label::Info, 1}});
    auto g = graph_of({{"a.com", "t.com"}, {"b.com", "t.com"}, {"c.com", "t.com"}, {"i.com", "t.com"},
                       {"a.com", "b.com"}, {"b.com", "a.com"}, {"c.com", "z.com"}},
                      labels);
    auto sub = induced_in_subgraph(g, "t.com", only(Label::Disinfo));
    EXPECT_EQ(sub.node_count(), 4u);
    EXPECT_EQ(sub.edge_count(), 5u);
    auto lone = graph_of({{"t.com", "x.com"}});
    EXPECT_EQ(induced_in_subgraph(lone, "t.com", any_label()).node_count(), 1u);
    EXPECT_EQ(code_of([&] { induced_in_subgraph(g, "missing.com", any_label()); }), "UnknownNode");
}

TEST(InducedSubgraph, MatchesBruteForce) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto r = oracle::random_graph(60, 0.08, seed + 500);
        for (std::size_t target = 0; target < r.names.size(); target += 7) {
            auto [nodes, edges] = oracle::induced_in_subgraph(r, target, Label::Disinfo);
            auto sub = induced_in_subgraph(r.graph, r.names[target], only(Label::Disinfo));
            std::set<std::string> got_nodes(sub.names().begin(), sub.names().end());
            std::set<std::pair<std::string, std::string>> got_edges;
            for (const auto& [a, b] : sub.edges()) got_edges.insert({sub.name(a), sub.name(b)});
            EXPECT_EQ(got_nodes, nodes);
            EXPECT_EQ(got_edges, edges);
        }
    }
}

TEST(DenseClusters, Examples) {
    std::vector<std::pair<std::string, std::string>> seven;
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
            if (a != b) seven.emplace_back("r" + std::to_string(a) + ".com", "r" + std::to_string(b) + ".com");
    seven.emplace_back("r0.com", "other.com");
    auto c7 = find_dense_clusters(graph_of(seven), 3);
    ASSERT_EQ(c7.size(), 1u);
    EXPECT_EQ(c7[0].size(), 7u);

    EXPECT_TRUE(find_dense_clusters(graph_of({{"a", "b"}, {"b", "c"}, {"c", "a"}}), 3).empty());

    std::vector<std::pair<std::string, std::string>> overlap;
    for (auto [x, y] : std::vector<std::pair<std::string, std::string>>{{"a", "b"}, {"a", "c"}, {"b", "c"}, {"b", "d"}, {"c", "d"}}) {
        overlap.emplace_back(x, y);
        overlap.emplace_back(y, x);
    }
    auto two = find_dense_clusters(graph_of(overlap), 3);
    EXPECT_EQ(two, (std::vector<std::vector<std::string>>{{"a", "b", "c"}, {"b", "c", "d"}}));
    EXPECT_EQ(code_of([&] { find_dense_clusters(graph_of(overlap), 2); }), "InvalidArgument");
}

namespace {

std::vector<std::vector<std::string>> sorted(std::vector<std::vector<std::string>> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST(DenseClusters, EveryMutualGraphOnFourNodes) {
    const std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
        std::vector<std::pair<std::string, std::string>> edges;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            auto a = "v" + std::to_string(pairs[p].first), b = "v" + std::to_string(pairs[p].second);
            edges.emplace_back(a, b);  // one direction always present
            if (mask >> p & 1) edges.emplace_back(b, a);
        }
        auto g = graph_of(edges);
        EXPECT_EQ(sorted(find_dense_clusters(g, 3)), oracle::maximal_mutual_cliques(g, 3)) << "mask " << mask;
    }
}

TEST(DenseClusters, RandomTenNodeGraphs) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto r = oracle::random_graph(10, 0.7, seed + 9000);
        auto got = find_dense_clusters(r.graph, 3);
        for (std::size_t i = 1; i < got.size(); ++i) EXPECT_GE(got[i - 1].size(), got[i].size());
        EXPECT_EQ(sorted(got), oracle::maximal_mutual_cliques(r.graph, 3)) << "seed " << seed;
    }
}

TEST(Adjacency, ToyMatrix) {
    auto labels = labels_of({{"i1.com", Label::Info, 2}, {"i2.com", Label::Info, 1}, {"d1.com", Label::Disinfo, 0},
                             {"d2.com", Label::Disinfo, 0}});
    auto g = graph_of({{"d1.com", "d2.com"}, {"i1.com", "d1.com"}, {"i2.com", "i1.com"}, {"d2.com", "x.com"}}, labels);
    auto m = export_adjacency(g, labels);
    EXPECT_EQ(m.keys, (std::vector<std::string>{"i2.com", "i1.com", "d1.com", "d2.com"}));
    EXPECT_EQ(m.info_count, 2u);
    // cells[row*n + col] = edge(col -> row)
    const std::vector<std::uint8_t> want = {0, 0, 0, 0,  //
                                            1, 0, 0, 0,  //
                                            0, 1, 0, 0,  //
                                            0, 0, 1, 0};
    EXPECT_EQ(m.cells, want);
    EXPECT_EQ(m.at(3, 2), 1);  // disinfo -> disinfo in the disinfo block
    EXPECT_EQ(adjacency_csv(m), "0,0,0,0\n1,0,0,0\n0,1,0,0\n0,0,1,0\n");
    EXPECT_EQ(adjacency_keys_csv(m), "index,domain,label\n0,i2.com,info\n1,i1.com,info\n2,d1.com,disinfo\n3,d2.com,disinfo\n");
    auto bin = adjacency_binary(m);
    ASSERT_EQ(bin.size(), 8u + 8u + 16u);
    EXPECT_EQ(bin.substr(0, 8), "DLADJ001");
    EXPECT_EQ(static_cast<unsigned char>(bin[8]), 4);
}

TEST(Adjacency, EdgelessAndMissingRank) {
    auto labels = labels_of({{"a.com", Label::Info, 1}, {"b.com", Label::Disinfo, 0}});
    auto g = LinkGraph::from_edges({{"a.com", Label::Info}, {"b.com", Label::Disinfo}},
                                   std::vector<std::pair<std::string, std::string>>{});
    auto m = export_adjacency(g, labels);
    EXPECT_EQ(m.cells, std::vector<std::uint8_t>(4, 0));
    auto bad = labels_of({{"a.com", Label::Info, 0}});
    EXPECT_EQ(code_of([&] { export_adjacency(g, bad); }), "MissingRank");
}

TEST(Export, DotGraphmlAndCsvRoundTrip) {
    auto labels = labels_of({{"a.com", Label::Info, 1}});
    auto g = LinkGraph::from_edges({{"iso.com", Label::Disinfo}}, std::vector<std::pair<std::string, std::string>>{{"a.com", "b.com"}});
    g.set_labels(labels);
    EXPECT_NE(export_graph(g, GraphFormat::Dot).find("\"a.com\" -> \"b.com\""), std::string::npos);
    auto gml = export_graph(g, GraphFormat::GraphML);
    EXPECT_NE(gml.find("<graphml"), std::string::npos);
    EXPECT_NE(gml.find("edgedefault=\"directed\""), std::string::npos);
    auto back = parse_edge_csv(export_graph(g, GraphFormat::EdgeCsv));
    EXPECT_EQ(back, g);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r = oracle::random_graph(40, 0.1, seed);
        EXPECT_EQ(parse_edge_csv(export_graph(r.graph, GraphFormat::EdgeCsv)), r.graph);
    }
}
