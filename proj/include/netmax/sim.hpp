#pragma once

#include <string>
#include <vector>

#include "netmax/config.hpp"
#include "netmax/matrix.hpp"

namespace netmax {

enum class StopReason { max_steps, max_time, target_deviation };

std::string stop_reason_to_string(StopReason r);

// One row per global step (k advances whenever a worker completes an
// iteration). node/neighbor are -1 on the initial-state row; neighbor == node
// marks a self-iteration.
struct TraceRow {
    long k = 0;
    double clock = 0.0;
    int node = -1;
    int neighbor = -1;
    double iter_time = 0.0;
    double deviation = 0.0;
    double spread = 0.0;
    double objective = 0.0;
};

struct PolicyChange {
    double clock = 0.0;
    double rho = 0.0;
    double lambda2 = 0.0;
    double tbar = 0.0;
    double t_convergence = 0.0;
    Matrix policy; // kept in memory; summaries serialize the scalars only
};

struct NetworkChange {
    double clock = 0.0;
    int a = 0;
    int b = 0;
    double factor = 1.0;
};

struct RunRecord {
    std::string protocol;
    uint64_t seed = 0;
    std::vector<TraceRow> trace;
    std::vector<PolicyChange> policy_changes;
    std::vector<NetworkChange> network_changes;
    std::vector<std::string> warnings;
    std::vector<std::vector<double>> final_models;
    std::vector<double> x_star;

    long global_steps = 0;
    double sim_time = 0.0;
    StopReason stop_reason = StopReason::max_steps;
    double initial_deviation = 0.0;
    double final_deviation = 0.0;
    double final_spread = 0.0;

    // per-node / per-link accounting
    std::vector<long> node_iterations;  // n_i
    std::vector<long> self_iterations;
    Matrix link_usage;                     // (i,m): completed pulls of i from m
    std::vector<double> mean_iteration_time;       // over all iterations
    std::vector<double> eq2_iteration_time;        // self-excluded sum / all count

    bool learning_rate_ok = true;
    double learning_rate_limit = 0.0;

    nlohmann::json config_echo;
};

// NetMax protocol: asynchronous workers plus the periodic monitor.
RunRecord run_simulation(const ExperimentConfig& cfg);

// Baselines share the event machinery; `variant` overrides cfg.protocol.
RunRecord run_baseline(const ExperimentConfig& cfg, Protocol variant);

// Dispatch on cfg.protocol.
RunRecord run_protocol(const ExperimentConfig& cfg);

} // namespace netmax
