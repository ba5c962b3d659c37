#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "netmax/sim.hpp"

namespace netmax {

// Σ_i ||x_i - x*||².
double deviation(const std::vector<std::vector<double>>& xs, const std::vector<double>& x_star);

// max_{i,m} ||x_i - x_m||.
double consensus_spread(const std::vector<std::vector<double>>& xs);

enum class BoundKind { static_network, dynamic_network };

// λᵏ·init_dev + α²σ²·λ/(1-λ). Throws DegenerateLambda outside (0,1).
double theorem_bound(double lambda, long k, double init_dev, double alpha, double sigma);

struct BoundParams {
    BoundKind kind = BoundKind::static_network;
    // One λ per logged step: constant for static networks, the running maximum
    // of the monitor's history for dynamic ones.
    std::vector<double> lambda_per_step;
    double init_dev = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    bool assumptions_met = true;
};

struct BoundReport {
    BoundKind kind = BoundKind::static_network;
    std::vector<double> bound;
    long violations = 0;
    double max_relative_violation = 0.0;
    bool assumptions_met = true;
    // Violations only count against a binding report (assumptions verified).
    bool binding = true;
};

// mean_dev[k] is the per-step deviation averaged over seeds (index 0 = step 0).
// Steps where mean_dev > bound·(1+slack) are flagged.
BoundReport check_bound_trace(const std::vector<double>& mean_dev, const BoundParams& params,
                              double slack = 0.10);

// Mean deviation trace over a set of runs, truncated to the shortest one.
std::vector<double> mean_deviation_trace(const std::vector<RunRecord>& runs);

// Running max of the recorded λ₂ history aligned to a run's trace steps.
std::vector<double> lambda_max_per_step(const RunRecord& run);

// Earliest clock at which the deviation reaches eps; negative when never.
double time_to_eps(const RunRecord& run, double eps);

nlohmann::json summary_json(const RunRecord& record);

// One header line {"schema_version": ..., "kind": "trace"}, then one JSON
// object per trace row.
std::string trace_jsonl(const RunRecord& record);

// Same rows as CSV, for external plotting tools.
std::string trace_csv(const RunRecord& record);

// JSONL trace plus summary JSON. Throws IoFailure.
void write_metrics(const RunRecord& record, const std::string& trace_path,
                   const std::string& summary_path);

} // namespace netmax
