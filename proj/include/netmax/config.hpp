#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netmax/link_time.hpp"
#include "netmax/loss.hpp"
#include "netmax/matrix.hpp"
#include "netmax/topology.hpp"

namespace netmax {

enum class Protocol { netmax, uniform_async, sync_allreduce, uniform_async_with_monitor };

Protocol protocol_from_string(const std::string& name);
std::string protocol_to_string(Protocol p);

struct SlowdownSpec {
    bool enabled = false;
    double factor_min = 2.0;
    double factor_max = 100.0;
    double rotation_interval = 25.0;
    std::optional<uint64_t> seed;                      // unset: derived from the run seed
    std::optional<std::vector<SlowdownEvent>> events;  // explicit schedule overrides the generator
};

struct LossSpec {
    int dim = 8;
    double sigma = 0.0;
    NoiseKind noise = NoiseKind::gaussian;
    // curvature
    std::string curvature_kind = "shared-diagonal"; // shared-diagonal | per-node-diagonal | random-spd
    std::vector<double> shared_diag;                // resolved to dim entries
    std::vector<std::vector<double>> per_node_diag;
    std::vector<double> spectrum; // random-spd
    uint64_t curvature_seed = 1;
    // centers
    std::string center_kind = "shared"; // shared | per-node | gaussian
    std::vector<double> shared_center;
    std::vector<std::vector<double>> per_node_center;
    double center_scale = 1.0;
    std::optional<uint64_t> center_seed; // unset: fixed default, independent of the run seed
};

struct InitSpec {
    std::string kind = "gaussian"; // gaussian | sphere | zero
    double scale = 1.0;            // gaussian std-dev per coordinate
    double radius = 1.0;           // sphere: exact per-node distance from the optimum
    std::optional<uint64_t> seed;  // unset: derived from the run seed
};

struct StopSpec {
    double max_time = 100.0;
    long max_steps = 100000;
    std::optional<double> target_deviation;
};

struct MetricsSpec {
    std::vector<double> eps_list = {1.0, 0.1, 0.01};
    int trace_every = 1;
};

struct CompareSpec {
    std::vector<std::string> protocols;
    int seed_count = 20;
    uint64_t seed_base = 1;
    double target = 0.01; // deviation threshold whose time-to-eps is compared
};

struct ExperimentConfig {
    int schema_version = 1;
    Protocol protocol = Protocol::netmax;
    uint64_t seed = 1;

    Topology topology;
    std::vector<double> compute_times;
    Matrix comm_times;
    SlowdownSpec slowdown;

    double alpha = 0.1;
    double rho_init = 0.1;
    double beta = 0.9;
    double monitor_period = 5.0;
    double epsilon = 0.01;
    int search_outer = 16;
    int search_inner = 16;
    double lp_margin = 1e-6;
    bool stale_reads = false;

    LossSpec loss;
    InitSpec init;
    StopSpec stop;
    MetricsSpec metrics;
    CompareSpec compare;
};

// Parse + validate; defaults are materialized. Throws error(ConfigInvalid).
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

// Resolved document with every default explicit; parse(config_to_json(c)) is
// semantically identical to c.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// "a.b.c=value" overrides applied to the raw document before parsing.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Materialized per-node losses / link model / initial models for one run.
std::vector<QuadraticLoss> make_losses(const ExperimentConfig& cfg);
LinkTimeModel make_link_model(const ExperimentConfig& cfg, uint64_t run_seed);
std::vector<std::vector<double>> initial_models(const ExperimentConfig& cfg, uint64_t run_seed,
                                                const std::vector<double>& x_star);

} // namespace netmax
