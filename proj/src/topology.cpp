#include "netmax/topology.hpp"

#include <queue>

namespace netmax {

const char* errc_name(errc code) {
    switch (code) {
        case errc::disconnected_graph: return "DisconnectedGraph";
        case errc::asymmetric_adjacency: return "AsymmetricAdjacency";
        case errc::self_loop_present: return "SelfLoopPresent";
        case errc::unknown_edge: return "UnknownEdge";
        case errc::non_positive_alpha: return "NonPositiveAlpha";
        case errc::empty_interval: return "EmptyInterval";
        case errc::invalid_interval: return "InvalidInterval";
        case errc::infeasible: return "Infeasible";
        case errc::numerical_failure: return "NumericalFailure";
        case errc::zero_probability_edge: return "ZeroProbabilityEdge";
        case errc::zero_probability: return "ZeroProbability";
        case errc::not_converged: return "NotConverged";
        case errc::degenerate_lambda: return "DegenerateLambda";
        case errc::zero_iteration_time: return "ZeroIterationTime";
        case errc::invalid_m: return "InvalidM";
        case errc::invalid_a: return "InvalidA";
        case errc::singular_system: return "SingularSystem";
        case errc::beta_out_of_range: return "BetaOutOfRange";
        case errc::config_invalid: return "ConfigInvalid";
        case errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

Topology Topology::ring(int m) {
    Topology t(m, std::vector<uint8_t>(static_cast<size_t>(m) * m, 0));
    if (m == 2) {
        t.set_edge(0, 1);
        return t;
    }
    for (int i = 0; i < m; ++i) t.set_edge(i, (i + 1) % m);
    return t;
}

Topology Topology::fully_connected(int m) {
    Topology t(m, std::vector<uint8_t>(static_cast<size_t>(m) * m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) t.set_edge(i, j);
    return t;
}

TopologyCheck validate_topology(const Topology& topo) {
    const int n = topo.nodes;
    for (int i = 0; i < n; ++i) {
        if (topo.edge(i, i))
            return {false, errc::self_loop_present, "node " + std::to_string(i) + " has a self loop"};
        for (int m = i + 1; m < n; ++m) {
            if (topo.edge(i, m) != topo.edge(m, i))
                return {false, errc::asymmetric_adjacency,
                        "entry (" + std::to_string(i) + "," + std::to_string(m) + ") is not symmetric"};
        }
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int i = q.front();
        q.pop();
        for (int m = 0; m < n; ++m) {
            if (topo.edge(i, m) && !seen[m]) {
                seen[m] = 1;
                ++count;
                q.push(m);
            }
        }
    }
    if (count != n)
        return {false, errc::disconnected_graph,
                std::to_string(n - count) + " node(s) unreachable from node 0"};
    return {};
}

bool support_graph_connected(const std::vector<double>& weights, int n, double tol) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int i = q.front();
        q.pop();
        for (int m = 0; m < n; ++m) {
            if (m == i || seen[m]) continue;
            if (weights[static_cast<size_t>(i) * n + m] > tol) {
                seen[m] = 1;
                ++count;
                q.push(m);
            }
        }
    }
    return count == n;
}

} // namespace netmax
