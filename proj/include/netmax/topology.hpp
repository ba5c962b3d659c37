#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netmax/errors.hpp"

namespace netmax {

// Undirected connectivity graph over worker nodes. adj is row-major M*M with
// 0/1 entries; kept as-is so validate_topology can report exactly what is wrong
// with an externally supplied matrix.
struct Topology {
    int nodes = 0;
    std::vector<uint8_t> adj;

    Topology() = default;
    Topology(int m, std::vector<uint8_t> adjacency) : nodes(m), adj(std::move(adjacency)) {}

    bool edge(int i, int m) const { return adj[static_cast<size_t>(i) * nodes + m] != 0; }

    void set_edge(int i, int m, bool present = true) {
        adj[static_cast<size_t>(i) * nodes + m] = present ? 1 : 0;
        adj[static_cast<size_t>(m) * nodes + i] = present ? 1 : 0;
    }

    int degree(int i) const {
        int d = 0;
        for (int m = 0; m < nodes; ++m) d += edge(i, m) ? 1 : 0;
        return d;
    }

    std::vector<int> neighbors(int i) const {
        std::vector<int> out;
        for (int m = 0; m < nodes; ++m)
            if (edge(i, m)) out.push_back(m);
        return out;
    }

    // Unordered edge list, i < m.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < nodes; ++i)
            for (int m = i + 1; m < nodes; ++m)
                if (edge(i, m)) out.emplace_back(i, m);
        return out;
    }

    static Topology ring(int m);
    static Topology fully_connected(int m);
};

struct TopologyCheck {
    bool ok = true;
    errc code = errc::config_invalid;
    std::string detail;
};

// ok iff adjacency is symmetric, zero-diagonal and connected (BFS from node 0).
TopologyCheck validate_topology(const Topology& topo);

// Reachability over an arbitrary nonneg matrix support (used for the gossip
// expectation's support graph as well).
bool support_graph_connected(const std::vector<double>& weights, int n, double tol = 0.0);

} // namespace netmax
