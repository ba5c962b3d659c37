#include "netmax/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "netmax/errors.hpp"

namespace netmax {

using nlohmann::json;

double deviation(const std::vector<std::vector<double>>& xs, const std::vector<double>& x_star) {
    double s = 0.0;
    for (const auto& x : xs) s += squared_distance(x, x_star);
    return s;
}

double consensus_spread(const std::vector<std::vector<double>>& xs) {
    double worst = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t m = i + 1; m < xs.size(); ++m)
            worst = std::max(worst, squared_distance(xs[i], xs[m]));
    return std::sqrt(worst);
}

double theorem_bound(double lambda, long k, double init_dev, double alpha, double sigma) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw error(errc::degenerate_lambda, "bound needs lambda in (0,1)");
    return std::pow(lambda, static_cast<double>(k)) * init_dev +
           alpha * alpha * sigma * sigma * lambda / (1.0 - lambda);
}

BoundReport check_bound_trace(const std::vector<double>& mean_dev, const BoundParams& params,
                              double slack) {
    BoundReport report;
    report.kind = params.kind;
    report.assumptions_met = params.assumptions_met;
    report.binding = params.assumptions_met;
    report.bound.resize(mean_dev.size());
    for (size_t k = 0; k < mean_dev.size(); ++k) {
        const double lambda =
            params.lambda_per_step.empty()
                ? 0.0
                : params.lambda_per_step[std::min(k, params.lambda_per_step.size() - 1)];
        const double b =
            theorem_bound(lambda, static_cast<long>(k), params.init_dev, params.alpha, params.sigma);
        report.bound[k] = b;
        const double limit = b * (1.0 + slack);
        if (mean_dev[k] > limit && report.binding) {
            report.violations++;
            report.max_relative_violation =
                std::max(report.max_relative_violation, mean_dev[k] / b - 1.0);
        }
    }
    return report;
}

std::vector<double> mean_deviation_trace(const std::vector<RunRecord>& runs) {
    if (runs.empty()) return {};
    size_t len = runs.front().trace.size();
    for (const auto& r : runs) len = std::min(len, r.trace.size());
    std::vector<double> mean(len, 0.0);
    for (const auto& r : runs)
        for (size_t k = 0; k < len; ++k) mean[k] += r.trace[k].deviation;
    for (double& v : mean) v /= static_cast<double>(runs.size());
    return mean;
}

std::vector<double> lambda_max_per_step(const RunRecord& run) {
    std::vector<double> out(run.trace.size(), 0.0);
    double running = 0.0;
    size_t next_change = 0;
    for (size_t k = 0; k < run.trace.size(); ++k) {
        const double clock = run.trace[k].clock;
        while (next_change < run.policy_changes.size() &&
               run.policy_changes[next_change].clock <= clock) {
            running = std::max(running, run.policy_changes[next_change].lambda2);
            ++next_change;
        }
        out[k] = running;
    }
    return out;
}

double time_to_eps(const RunRecord& run, double eps) {
    for (const auto& row : run.trace)
        if (row.deviation <= eps) return row.clock;
    return -1.0;
}

json summary_json(const RunRecord& record) {
    json doc;
    doc["schema_version"] = 1;
    doc["protocol"] = record.protocol;
    doc["seed"] = record.seed;
    doc["config"] = record.config_echo;
    doc["stop_reason"] = stop_reason_to_string(record.stop_reason);
    doc["global_steps"] = record.global_steps;
    doc["sim_time"] = record.sim_time;
    doc["initial_deviation"] = record.initial_deviation;
    doc["final_deviation"] = record.final_deviation;
    doc["final_spread"] = record.final_spread;

    json tte = json::object();
    const auto eps_list = record.config_echo.contains("metrics")
                              ? record.config_echo["metrics"]["eps_list"].get<std::vector<double>>()
                              : std::vector<double>{};
    char key[64];
    for (double eps : eps_list) {
        std::snprintf(key, sizeof key, "%.9g", eps);
        const double t = time_to_eps(record, eps);
        tte[key] = t >= 0.0 ? json(t) : json(nullptr);
    }
    doc["time_to_eps"] = tte;

    std::vector<std::vector<double>> usage(record.link_usage.rows,
                                           std::vector<double>(record.link_usage.cols, 0.0));
    for (int i = 0; i < record.link_usage.rows; ++i)
        for (int m = 0; m < record.link_usage.cols; ++m) usage[i][m] = record.link_usage(i, m);
    doc["link_usage"] = usage;
    doc["node_iterations"] = record.node_iterations;
    doc["self_iterations"] = record.self_iterations;
    doc["mean_iteration_time"] = record.mean_iteration_time;
    doc["eq2_iteration_time"] = record.eq2_iteration_time;

    json changes = json::array();
    for (const auto& c : record.policy_changes)
        changes.push_back({{"clock", c.clock},
                           {"rho", c.rho},
                           {"lambda2", c.lambda2},
                           {"tbar", c.tbar},
                           {"t_convergence", c.t_convergence}});
    doc["policy_changes"] = changes;

    json lambda_history = json::array();
    double lambda_max = 0.0;
    for (const auto& c : record.policy_changes) {
        lambda_history.push_back(c.lambda2);
        lambda_max = std::max(lambda_max, c.lambda2);
    }
    doc["lambda_history"] = lambda_history;
    doc["lambda_max"] = record.policy_changes.empty() ? json(nullptr) : json(lambda_max);

    json network = json::array();
    for (const auto& c : record.network_changes)
        network.push_back({{"clock", c.clock}, {"link", {c.a, c.b}}, {"factor", c.factor}});
    doc["network_changes"] = network;

    doc["warnings"] = record.warnings;
    doc["assumptions"] = {{"learning_rate_ok", record.learning_rate_ok},
                          {"learning_rate_limit", record.learning_rate_limit}};
    return doc;
}

std::string trace_jsonl(const RunRecord& record) {
    std::string out;
    out.reserve(record.trace.size() * 96 + 64);
    {
        json header;
        header["schema_version"] = 1;
        header["kind"] = "trace";
        out += header.dump();
        out += '\n';
    }
    for (const auto& row : record.trace) {
        json line;
        line["k"] = row.k;
        line["clock"] = row.clock;
        line["node"] = row.node;
        line["neighbor"] = row.neighbor;
        line["iter_time"] = row.iter_time;
        line["deviation"] = row.deviation;
        line["spread"] = row.spread;
        line["objective"] = row.objective;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::string trace_csv(const RunRecord& record) {
    std::string out = "k,clock,node,neighbor,iter_time,deviation,spread,objective\n";
    char line[256];
    for (const auto& row : record.trace) {
        std::snprintf(line, sizeof line, "%ld,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g\n", row.k,
                      row.clock, row.node, row.neighbor, row.iter_time, row.deviation, row.spread,
                      row.objective);
        out += line;
    }
    return out;
}

void write_metrics(const RunRecord& record, const std::string& trace_path,
                   const std::string& summary_path) {
    {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw error(errc::io_failure, "cannot write " + trace_path);
        out << trace_jsonl(record);
    }
    {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out) throw error(errc::io_failure, "cannot write " + summary_path);
        out << summary_json(record).dump(2) << '\n';
    }
}

} // namespace netmax
