#pragma once

#include "domainlens/social.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace domainlens {

struct Partition {
    std::vector<std::string> nodes;          // graph node order
    std::vector<std::size_t> community_of;  // dense ids, numbered by first node
    double modularity = 0.0;

    std::size_t community_count() const;
    std::optional<std::size_t> community(std::string_view node) const;
};

// Q = sum_c [ L_c / m - (d_c / 2m)^2 ] over weighted edges; 0 without edges.
double modularity(const UndirectedGraph& g, const std::vector<std::size_t>& community_of);

// Multi-level greedy modularity optimization; node visiting order is
// shuffled with `seed`. Throws Data/EmptyGraph.
Partition louvain(const UndirectedGraph& g, std::uint64_t seed);
Partition louvain(const LinkGraph& g, std::uint64_t seed);

// Semi-synchronous label propagation over a greedy coloring; ties broken
// with `seed`. Edge weights are ignored. Throws Data/EmptyGraph.
Partition label_propagation(const UndirectedGraph& g, std::uint64_t seed);
Partition label_propagation(const LinkGraph& g, std::uint64_t seed);

// {"modularity": Q, "communities": n, "nodes": {name: id}}
nlohmann::json to_json(const Partition& p);

}  // namespace domainlens
